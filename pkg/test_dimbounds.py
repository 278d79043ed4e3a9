"""
Dimension Bound Tests

Closed-form values, the fixed-point arithmetic search that re-derives them,
and the per-family checks at the dimensions the classifier uses.
"""

import sys

import pytest
from sympy import divisors, primerange

try:
    from obstruction.dimbounds import (
        alternating_checks,
        alternating_metacyclic_witness,
        bounds_for,
        closed_form_excluded,
        family_checks,
        min_dim_elem_abelian,
        min_dim_from_lemma2,
        min_dim_metacyclic,
        min_dim_psl2,
        orthogonal_levi,
        prime_power,
        psl2_checks,
        pslm_checks,
        pslm_family_filter,
        psp_chain,
        psp_checks,
        sl2_dim5_admissible,
    )
    from obstruction.errors import NoEffectiveAction, NonPrime, PrimeTooSmall
except ImportError as e:
    print(f"❌ Import error: {e}")
    print("   Run: pip install -r requirements.txt")
    sys.exit(1)


def _prime_powers(limit):
    for p in primerange(2, limit + 1):
        q = p
        while q <= limit:
            yield p, q
            q *= p


def test_closed_forms():
    """Elementary abelian, PSL_2(p) and metacyclic values"""
    print("\n" + "="*60)
    print("Test: Closed Forms")
    print("="*60)

    assert min_dim_elem_abelian(2, 3) == 3
    assert min_dim_elem_abelian(3, 3) == 5
    assert min_dim_psl2(5) == 2
    assert min_dim_psl2(7) == 5
    assert min_dim_psl2(11) == 9
    assert min_dim_psl2(13) == 6
    assert min_dim_metacyclic(11, 5) == 9
    assert min_dim_metacyclic(23, 11) == 21
    assert min_dim_metacyclic(7, 6) == 6
    assert min_dim_metacyclic(13, 3) == 5
    assert sl2_dim5_admissible(5) and not sl2_dim5_admissible(7)
    print("✅ Closed forms passed")


def test_closed_form_errors():
    with pytest.raises(NonPrime):
        min_dim_psl2(9)
    with pytest.raises(PrimeTooSmall):
        min_dim_psl2(3)
    with pytest.raises(NoEffectiveAction):
        min_dim_metacyclic(11, 3)
    with pytest.raises(NonPrime):
        prime_power(12)
    assert prime_power(125) == (5, 3)


SEARCH_PRIMES = list(primerange(5, 98))


@pytest.mark.parametrize("p", SEARCH_PRIMES)
def test_fixed_point_search_matches_closed_forms(p):
    """The fixed-point arithmetic reproduces 2q - 1 / q and the PSL_2(p) value"""
    for q in divisors(p - 1):
        if q < 2:
            continue
        assert min_dim_from_lemma2(p, q) == min_dim_metacyclic(p, q), f"Z_{p} x| Z_{q}"
    assert min_dim_from_lemma2(p, (p - 1) // 2) == min_dim_psl2(p)


def test_psl2_survivors_in_dimension_5():
    """Closed forms leave q in {4, 5, 7, 9, 25}; the Borel argument then removes 25"""
    print("\n" + "="*60)
    print("Test: PSL_2(q) at n = 5")
    print("="*60)

    survivors = set()
    for p, q in _prime_powers(128):
        if q < 4:
            continue
        _, k = prime_power(q)
        if all(result.passed for result in psl2_checks(p, k, 5)):
            survivors.add(q)
    assert survivors == {4, 5, 7, 9, 25}, f"unexpected survivors {sorted(survivors)}"

    assert closed_form_excluded(("PSL", 2, 25), 5)
    assert not closed_form_excluded(("PSL", 2, 9), 5)
    assert not closed_form_excluded(("PSL", 2, 7), 5)
    print(f"Survivors: {sorted(survivors)}")
    print("✅ PSL_2 survivors passed")


def test_psl3_4_hyperplane_failure():
    """PSL3(4) passes the closed forms; the single-class involution count excludes it"""
    assert pslm_family_filter(3, 2, 2, 5).passed
    assert all(c.passed for c in pslm_checks(3, 2, 2, 5))
    assert not closed_form_excluded(("PSL", 3, 4), 5)

    checks = pslm_checks(3, 2, 2, 5, involution_classes=1)
    failing = [c for c in checks if not c.passed]
    assert failing and failing[0].filter == "Lemma1"
    assert (failing[0].lhs, failing[0].rhs) == (16, 7)

    relaxed = pslm_checks(3, 2, 2, 5, involution_classes=3)
    assert all(c.passed for c in relaxed), "without the single involution class PSL3(4) passes"


def test_alternating_checks():
    """A7 fails Prop 2 at n = 4; A8 falls through PSL4(2); A11 fails Prop 2 at n = 5"""
    a7 = [c for c in alternating_checks(7, 4) if not c.passed]
    assert a7[0].filter == "Prop2" and a7[0].lhs == 5 and a7[0].rhs == 4
    assert all(c.passed for c in alternating_checks(7, 5))

    a8 = [c for c in alternating_checks(8, 5) if not c.passed]
    assert a8[0].filter == "SubgroupChain" and a8[0].contained == ("PSL", 4, 2)
    assert closed_form_excluded(("PSL", 4, 2), 5)

    a11 = [c for c in alternating_checks(11, 5) if not c.passed]
    assert a11[0].filter == "Prop2" and a11[0].parameters == {"p": 11, "q": 5}

    translation, scaling = alternating_metacyclic_witness(11)
    assert translation.is_even and scaling.is_even
    assert translation.order() == 11 and scaling.order() == 5


def test_symplectic_chain():
    assert psp_chain(2, 5, 1) == [("PSL", 2, 25)]
    assert psp_chain(3, 2, 1) == [("Alt", 8)]
    assert ("PSp", 4, 4) in psp_chain(3, 2, 2)

    checks = psp_checks(2, 5, 1, 5)
    failing = [c for c in checks if not c.passed]
    assert len(failing) == 1
    assert failing[0].filter == "SubgroupChain" and failing[0].contained == ("PSL", 2, 25)

    never = psp_checks(2, 5, 1, 5, contained_excluded=lambda ref, n: False)
    assert all(c.passed for c in never)


def test_other_lie_levi():
    assert orthogonal_levi("O8+", 2) == 4
    assert orthogonal_levi("O8-", 2) == 3
    assert orthogonal_levi("O7", 3) == 3
    assert orthogonal_levi("O7", 2) is None
    assert orthogonal_levi("G2", 3) is None

    checks = family_checks(("OtherLie", "G2", 3), 5)
    assert [c.filter for c in checks][:2] == ["Sec32", "Lemma1"]
    assert family_checks(("Sporadic", "M11"), 5) == []


def test_bounds_for():
    out = bounds_for(("PSL", 2, 25))
    assert out["characteristic"] == 5
    assert out["root_rank_min_dim"] == 3
    assert out["psl2_p_min_dim"] == 2
    assert out["sl2_p_interval"] == [2, 5]
    assert out["prop1_dim5_admissible"] is None, "PSL2(q) does not contain SL2(q)"
    assert bounds_for(("PSL", 2, 7))["prop1_dim5_admissible"] is None
    assert bounds_for(("PSL", 3, 4))["prop1_dim5_admissible"] is True
    assert bounds_for(("PSU", 3, 7))["prop1_dim5_admissible"] is False
    assert bounds_for(("PSp", 4, 5))["prop1_dim5_admissible"] is True
    assert bounds_for(("OtherLie", "Sz", 8))["prop1_dim5_admissible"] is None

    out = bounds_for(("Alt", 7), 4)
    assert out["elem_abelian_2_rank"] == 2
    assert out["metacyclic"] == {"5": 2, "7": 5}
    assert any(c["filter"] == "Prop2" and not c["passed"] for c in out["checks"])


def run_all_tests():
    """Run the bound tests without pytest"""
    print("\n" + "="*60)
    print("DIMENSION BOUNDS - VALIDATION TESTS")
    print("="*60)

    try:
        test_closed_forms()
        test_closed_form_errors()
        for p in SEARCH_PRIMES:
            test_fixed_point_search_matches_closed_forms(p)
        test_psl2_survivors_in_dimension_5()
        test_psl3_4_hyperplane_failure()
        test_alternating_checks()
        test_symplectic_chain()
        test_other_lie_levi()
        test_bounds_for()
        print("\n✅ ALL TESTS PASSED")
        return 0
    except AssertionError as e:
        print(f"\n❌ Test failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(run_all_tests())
