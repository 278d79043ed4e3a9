"""
Catalog Tests

Group naming, exceptional isomorphisms, orders, family enumeration and the
witness config format.
"""

import sys
from pathlib import Path

import pytest

try:
    from obstruction.catalog import (
        FAMILIES,
        SPORADIC_NAMES,
        Family,
        GroupId,
        WitnessKind,
        aliases,
        alt,
        family_iter,
        group_order,
        is_simple,
        load_witness_config,
        normalize_id,
        other_lie,
        parse_group,
        parse_witness_config,
        psl,
        psp,
        psu,
        sporadic,
    )
    from obstruction.errors import ConfigMissing, InvalidWitness, NotSimple, ParseError, UnknownGroup
except ImportError as e:
    print(f"❌ Import error: {e}")
    print("   Run: pip install -r requirements.txt")
    sys.exit(1)

SHIPPED_CONFIG = Path(__file__).parent / "data" / "witnesses.cfg"


def test_parse_group_forms():
    """Every accepted spelling resolves to the same identifier"""
    print("\n" + "="*60)
    print("Test: Group Names")
    print("="*60)

    assert parse_group("A7") == alt(7)
    assert parse_group("Alt(7)") == alt(7)
    assert parse_group("PSL(2,25)") == psl(2, 25)
    assert parse_group("PSL2(25)") == psl(2, 25)
    assert parse_group("L2(25)") == psl(2, 25)
    assert parse_group("PSp(4, 3)") == psp(4, 3)
    assert parse_group("S4(3)") == psp(4, 3)
    assert parse_group("PSU(3,3)") == psu(3, 3)
    assert parse_group("U3(3)") == psu(3, 3)
    assert parse_group("G2(4)") == other_lie("G2", 4)
    assert parse_group("2F4(2)'") == other_lie("2F4", 2)
    assert parse_group("2G2(27)") == other_lie("Ree", 27)
    assert parse_group("O8-(2)") == other_lie("O8-", 2)
    assert parse_group("Fi24'") == sporadic("Fi24'")

    for bad in ("PSL(2,3)", "A4", "PSL(2,6)", "Monster", "Sz(2)", "PSp(4,2)"):
        with pytest.raises(UnknownGroup):
            parse_group(bad)
    print("✅ Group names passed")


def test_display_names():
    assert str(alt(7)) == "A7"
    assert str(psl(2, 7)) == "PSL2(7)"
    assert str(psp(4, 5)) == "PSp4(5)"
    assert str(other_lie("2F4", 2)) == "2F4(2)'"
    assert str(other_lie("O8-", 2)) == "O8-(2)"
    assert str(sporadic("M11")) == "M11"


def test_simplicity():
    assert is_simple(GroupId(Family.PSL, (2, 4)))
    assert not is_simple(GroupId(Family.PSL, (2, 3)))
    assert not is_simple(GroupId(Family.PSU, (3, 2)))
    assert not is_simple(GroupId(Family.PSP, (4, 2)))
    assert not is_simple(GroupId(Family.OTHER_LIE, ("Sz", 4)))
    assert not is_simple(GroupId(Family.OTHER_LIE, ("O8", 2)))
    assert is_simple(GroupId(Family.OTHER_LIE, ("O7", 3)))
    assert not is_simple(GroupId(Family.OTHER_LIE, ("O7", 2))), "O7(2) is enumerated as PSp6(2)"
    with pytest.raises(NotSimple):
        alt(4)
    with pytest.raises(NotSimple):
        normalize_id(GroupId(Family.PSL, (2, 2)))


def test_exceptional_isomorphisms():
    """Aliases put the canonical representative first"""
    assert aliases(psl(2, 5)) == [alt(5), psl(2, 4), psl(2, 5)]
    assert normalize_id(psl(2, 9)) == alt(6)
    assert normalize_id(psl(3, 2)) == psl(2, 7)
    assert normalize_id(alt(8)) == psl(4, 2)
    assert aliases(alt(8)) == [psl(4, 2), alt(8)]
    assert normalize_id(psp(4, 3)) == psu(4, 2)
    assert aliases(alt(7)) == [alt(7)]


def test_group_orders():
    assert group_order(alt(5)) == 60
    assert group_order(psl(2, 7)) == 168
    assert group_order(psl(3, 2)) == 168
    assert group_order(psl(3, 4)) == 20160
    assert group_order(alt(8)) == group_order(psl(4, 2)) == 20160
    assert group_order(psu(3, 3)) == 6048
    assert group_order(psp(4, 3)) == group_order(psu(4, 2)) == 25920
    assert group_order(sporadic("M11")) is None


def test_family_iteration():
    """Enumeration is finite, duplicate free and simple"""
    print("\n" + "="*60)
    print("Test: Family Enumeration")
    print("="*60)

    for n in (3, 5, 8):
        for family in FAMILIES:
            members = list(family_iter(family, n))
            assert members, f"{family} is empty at n={n}"
            assert len(members) == len(set(members))
            assert all(is_simple(g) for g in members)
            print(f"  n={n} {family}: {len(members)} groups")

    alternating = list(family_iter("Alt", 5))
    assert alt(7) in alternating and alt(14) in alternating and alt(15) not in alternating
    assert psl(2, 25) in list(family_iter("PSL", 5))
    assert len(list(family_iter("Sporadic", 5))) == len(SPORADIC_NAMES) == 26

    with pytest.raises(ValueError):
        list(family_iter("Alt", 40))
    with pytest.raises(ValueError):
        list(family_iter("Monster", 5))
    print("✅ Family enumeration passed")


def test_parse_witness_config():
    entries = parse_witness_config(
        "# comment\n"
        "\n"
        "M11: metacyclic(11,5)   @ ATLAS: L2(11) < M11\n"
        "PSU(3,3): open 5\n"
        "PSU(3,3): linear 6\n"
        "J1: contains PSL(2,11)\n"
        "G2(3): contains SL(2,27)\n"
        "M11: metacyclic(11,5)\n"
    )
    assert len(entries) == 5, "duplicate entries collapse"
    first = entries[0]
    assert first.group == sporadic("M11") and first.kind is WitnessKind.METACYCLIC
    assert first.params == (11, 5) and first.provenance == "ATLAS: L2(11) < M11"
    assert first.describe() == "metacyclic(11, 5)"
    assert entries[3].describe() == "contains PSL2(11)"
    assert entries[4].kind is WitnessKind.CONTAINS_SL2 and entries[4].describe() == "contains SL2(27)"


CONFIG_ERRORS = [
    ("no colon here", ParseError),
    ("A7: frobnicate", ParseError),
    ("Monster: order 5", UnknownGroup),
    ("M11: metacyclic(11,3)", InvalidWitness),
    ("M11: metacyclic(12,2)", InvalidWitness),
    ("M11: elemab(2,0)", InvalidWitness),
    ("M11: contains M11", InvalidWitness),
    ("M11: contains PSL(2,6)", UnknownGroup),
]


@pytest.mark.parametrize("text,error", CONFIG_ERRORS)
def test_witness_config_errors(text, error):
    with pytest.raises(error):
        parse_witness_config(text)


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as info:
        parse_witness_config("M11: metacyclic(11,5)\n\nbroken\n")
    assert "3" in str(info.value)


def test_shipped_config():
    """Every sporadic group carries a witness; digests are stable"""
    config = load_witness_config(SHIPPED_CONFIG)
    assert len(config.entries) == 40
    named = {e.group for e in config.entries}
    assert all(sporadic(name) in named for name in SPORADIC_NAMES)
    assert len(config.digest) == 64
    assert config.digest == load_witness_config(SHIPPED_CONFIG).digest
    assert config.order(psu(4, 2)) == 25920
    assert config.order(sporadic("M11")) is None
    kinds = {e.kind for e in config.for_group(psu(3, 3))}
    assert kinds == {WitnessKind.CONTAINS, WitnessKind.LINEAR, WitnessKind.OPEN}
    assert config.of_kind(psp(4, 5), WitnessKind.CONTAINS)[0].params == (psl(2, 25),)

    with pytest.raises(ConfigMissing):
        load_witness_config(SHIPPED_CONFIG.with_name("missing.cfg"))


def run_all_tests():
    """Run the catalog tests without pytest"""
    print("\n" + "="*60)
    print("CATALOG - VALIDATION TESTS")
    print("="*60)

    try:
        test_parse_group_forms()
        test_display_names()
        test_simplicity()
        test_exceptional_isomorphisms()
        test_group_orders()
        test_family_iteration()
        test_parse_witness_config()
        for text, error in CONFIG_ERRORS:
            test_witness_config_errors(text, error)
        test_parse_error_carries_line()
        test_shipped_config()
        print("\n✅ ALL TESTS PASSED")
        return 0
    except AssertionError as e:
        print(f"\n❌ Test failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(run_all_tests())
