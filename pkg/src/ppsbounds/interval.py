"""Closed integer intervals carrying certified bound ranges."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Interval:
    """[lo, hi] with hi = None when no finite upper bound is certified."""

    lo: int
    hi: int | None = None

    def __post_init__(self):
        if self.lo < 0:
            raise ValueError(f"interval lower end must be nonnegative: {self.lo}")
        if self.hi is not None and self.hi < self.lo:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.hi == self.lo

    def to_jsonable(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}
