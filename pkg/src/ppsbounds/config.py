"""Override configuration: externally sourced exact values with provenance.

Entries carry values the calculator must not derive itself (exact immersion
dimensions, geometric dimensions, exact TC values from the literature).  The
file format is one entry per line:

    tc.P.15 = 23 ; provenance="survey table"
    imm.P.9 = 13 ; provenance="classical immersion tables"
    gd.12.28 = 5 ; provenance="generalized vector field problem tables"

Blank lines and lines starting with '#' are ignored.  The provenance string
is mandatory and must be nonempty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_LINE = re.compile(
    r"^\s*(?P<key>[A-Za-z][A-Za-z0-9_.]*)\s*=\s*(?P<value>\d+)\s*;"
    r"\s*provenance\s*=\s*\"(?P<prov>[^\"]*)\"\s*$"
)
_KEY = re.compile(r"^(tc\.P\.\d+|imm\.P\.\d+|gd\.\d+\.\d+)$")


@dataclass(frozen=True)
class OverrideEntry:
    key: str
    value: int
    provenance: str


class OverrideConfig:
    """Parsed override entries with typed lookups."""

    def __init__(self, entries: dict[str, OverrideEntry] | None = None):
        self.entries = dict(entries or {})

    @classmethod
    def empty(cls) -> "OverrideConfig":
        return cls()

    @classmethod
    def from_text(cls, text: str) -> "OverrideConfig":
        entries: dict[str, OverrideEntry] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = _LINE.match(line)
            if not m:
                raise ValueError(
                    f"config line {lineno} is malformed: {raw!r} "
                    '(expected key = value ; provenance="...")'
                )
            key, value, prov = m["key"], int(m["value"]), m["prov"]
            if not _KEY.match(key):
                raise ValueError(
                    f"config line {lineno}: unknown key {key!r} "
                    "(expected tc.P.<n>, imm.P.<n> or gd.<n1>.<k>)"
                )
            if not prov.strip():
                raise ValueError(f"config line {lineno}: provenance must be nonempty")
            if key in entries:
                raise ValueError(f"config line {lineno}: duplicate key {key!r}")
            entries[key] = OverrideEntry(key, value, prov)
        return cls(entries)

    @classmethod
    def from_file(cls, path) -> "OverrideConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @classmethod
    def from_items(cls, items) -> "OverrideConfig":
        """Build from (key, value, provenance) triples, e.g. request payloads."""
        text = "\n".join(
            f'{key} = {value} ; provenance="{prov}"' for key, value, prov in items
        )
        return cls.from_text(text)

    def _get(self, key: str) -> tuple[int, str] | None:
        entry = self.entries.get(key)
        return (entry.value, entry.provenance) if entry else None

    def tc(self, n: int) -> tuple[int, str] | None:
        return self._get(f"tc.P.{n}")

    def imm(self, n: int) -> tuple[int, str] | None:
        return self._get(f"imm.P.{n}")

    def gd(self, n1: int, k: int) -> tuple[int, str] | None:
        return self._get(f"gd.{n1}.{k}")

    def is_empty(self) -> bool:
        return not self.entries

    def to_jsonable(self) -> list[dict]:
        return [
            {"key": e.key, "value": e.value, "provenance": e.provenance}
            for e in sorted(self.entries.values(), key=lambda e: e.key)
        ]
