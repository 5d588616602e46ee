import pytest

from ppsbounds.config import OverrideConfig


def test_parse_and_lookup():
    config = OverrideConfig.from_text(
        """
        # external values
        tc.P.15 = 23 ; provenance="survey table"
        imm.P.9 = 13 ; provenance="immersion tables"
        gd.12.28 = 5 ; provenance="generalized vector field problem"
        """
    )
    assert config.tc(15) == (23, "survey table")
    assert config.imm(9) == (13, "immersion tables")
    assert config.gd(12, 28) == (5, "generalized vector field problem")
    assert config.tc(7) is None
    assert not config.is_empty()


def test_round_trip_items():
    config = OverrideConfig.from_text('tc.P.5 = 8 ; provenance="x"')
    rebuilt = OverrideConfig.from_items(
        (e["key"], e["value"], e["provenance"]) for e in config.to_jsonable()
    )
    assert rebuilt.tc(5) == (8, "x")


@pytest.mark.parametrize(
    "line",
    [
        "tc.P.5 = 8",  # missing provenance
        'tc.P.5 = 8 ; provenance=""',  # empty provenance
        'tc.P.5 = 8 ; provenance="a"\ntc.P.5 = 9 ; provenance="b"',  # duplicate
        'bogus.key = 1 ; provenance="a"',  # unknown key shape
        'tc.P.5 = -2 ; provenance="a"',  # negative value
        "just nonsense",
    ],
)
def test_rejects_malformed(line):
    with pytest.raises(ValueError):
        OverrideConfig.from_text(line)


def test_empty_is_empty():
    assert OverrideConfig.empty().is_empty()
    assert OverrideConfig.from_text("# only a comment\n\n").is_empty()
