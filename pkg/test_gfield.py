"""
Finite Field Tests

Moduli, arithmetic identities and squareness counts for GF(p^k).
"""

import sys

import pytest
from hypothesis import given, settings, strategies as st

try:
    from obstruction.errors import DegreeOutOfRange, DivisionByZero, NonPrime, OverflowBound, ZeroElement
    from obstruction.gfield import (
        element_order,
        elements,
        field_create,
        from_int,
        generator,
        inv,
        is_square,
        mul,
        one,
        power,
        prime_field_elem,
        square_set,
        to_int,
        zero,
    )
except ImportError as e:
    print(f"❌ Import error: {e}")
    print("   Run: pip install -r requirements.txt")
    sys.exit(1)


def test_moduli():
    """Lexicographically smallest monic irreducible moduli"""
    print("\n" + "="*60)
    print("Test: Field Moduli")
    print("="*60)

    assert field_create(5, 1).modulus == (0, 1), "GF(5) is the prime field"
    assert field_create(2, 2).modulus == (1, 1, 1), "GF(4) uses x^2 + x + 1"
    assert field_create(3, 2).modulus == (1, 0, 1), "GF(9) uses x^2 + 1"
    assert field_create(2, 3).q == 8
    assert field_create(5, 2).modulus == (2, 0, 1), "GF(25) uses x^2 + 2"
    assert field_create(2, 8).modulus == (1, 1, 0, 1, 1, 0, 0, 0, 1), "GF(256) uses x^8 + x^4 + x^3 + x + 1"
    print("✅ Moduli passed")


def test_creation_errors():
    """Invalid characteristic, degree and size"""
    with pytest.raises(NonPrime):
        field_create(6, 1)
    with pytest.raises(DegreeOutOfRange):
        field_create(2, 9)
    with pytest.raises(DegreeOutOfRange):
        field_create(3, 0)
    with pytest.raises(OverflowBound):
        field_create(251, 4)
    print("✅ Creation errors passed")


def test_arithmetic_examples():
    """Inverse in GF(7), x * x in GF(4), identity"""
    gf7 = field_create(7, 1)
    three = prime_field_elem(gf7, 3)
    assert inv(gf7, three) == prime_field_elem(gf7, 5), "3^-1 = 5 mod 7"

    gf4 = field_create(2, 2)
    x = from_int(gf4, 2)
    assert (x * x).coeffs == (1, 1), f"x^2 should reduce to x + 1, got {x * x}"

    for a in elements(field_create(3, 2)):
        assert mul(a.ctx, a, one(a.ctx)) == a

    with pytest.raises(DivisionByZero):
        inv(gf7, zero(gf7))
    print("✅ Arithmetic examples passed")


AXIOM_FIELDS = [(2, 1), (2, 2), (3, 1), (2, 3), (5, 1), (7, 1)]


@pytest.mark.parametrize("p,k", AXIOM_FIELDS)
def test_field_axioms_exhaustive(p, k):
    """Associativity, distributivity and inverses on all triples of small fields"""
    ctx = field_create(p, k)
    items = list(elements(ctx))
    for a in items:
        if not a.is_zero():
            assert a * inv(ctx, a) == one(ctx), f"{a} * {a}^-1 != 1 in GF({ctx.q})"
        for b in items:
            assert a + b == b + a
            assert a * b == b * a
            for c in items:
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(3, 3), (5, 2), (7, 2), (2, 8), (13, 2)]), st.data())
def test_field_axioms_random(field, data):
    """Random triples in larger fields"""
    ctx = field_create(*field)
    codes = st.integers(min_value=0, max_value=ctx.q - 1)
    a, b, c = (from_int(ctx, data.draw(codes)) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == zero(ctx)
    assert to_int(from_int(ctx, to_int(a))) == to_int(a)
    if not a.is_zero():
        assert a / a == one(ctx)


def test_tables_agree_with_field_class():
    """Materialised tables and the untabulated scalar path give the same products"""
    ctx = field_create(3, 2)
    assert ctx.tabulated
    GF = ctx.galois_field
    for a in range(ctx.q):
        for b in range(ctx.q):
            assert ctx.mul_code(a, b) == int(GF(a) * GF(b))
            assert ctx.add_code(a, b) == int(GF(a) + GF(b))

    big = field_create(2, 11)
    assert not big.tabulated
    for code in (1, 2, 3, 1000, 2047):
        a = from_int(big, code)
        assert a * inv(big, a) == one(big)
        assert power(big, a, big.q - 1) == one(big)
    assert element_order(big, generator(big)) == big.q - 1


def test_squares():
    """Square counts and the prime-subfield split"""
    print("\n" + "="*60)
    print("Test: Squares")
    print("="*60)

    gf7 = field_create(7, 1)
    assert sorted(to_int(a) for a in square_set(gf7)) == [1, 2, 4]

    for q_pk in [(3, 1), (5, 1), (3, 2), (7, 2), (3, 3), (5, 3), (7, 3)]:
        ctx = field_create(*q_pk)
        count = len(square_set(ctx))
        assert count == (ctx.q - 1) // 2, f"GF({ctx.q}) has {count} nonzero squares"

    for p in (3, 5, 7, 11, 13):
        for k in (1, 2, 3):
            ctx = field_create(p, k)
            prime_squares = sum(is_square(ctx, prime_field_elem(ctx, c)) for c in range(1, p))
            expected = p - 1 if k % 2 == 0 else (p - 1) // 2
            assert prime_squares == expected, f"GF({p}^{k}): {prime_squares} prime-field squares"

    gf8 = field_create(2, 3)
    assert all(is_square(gf8, a) for a in elements(gf8))
    assert is_square(gf7, zero(gf7)), "0 counts as a square"
    print("✅ Squares passed")


def test_element_orders():
    """Multiplicative orders and generators"""
    gf7 = field_create(7, 1)
    gf13 = field_create(13, 1)
    assert element_order(gf7, prime_field_elem(gf7, 6)) == 2
    assert element_order(gf13, prime_field_elem(gf13, 4)) == 6
    assert element_order(gf7, one(gf7)) == 1
    with pytest.raises(ZeroElement):
        element_order(gf7, zero(gf7))

    for pk in [(2, 2), (3, 2), (5, 2), (2, 5), (3, 3)]:
        ctx = field_create(*pk)
        g = generator(ctx)
        assert element_order(ctx, g) == ctx.q - 1
        assert power(ctx, g, ctx.q - 1) == one(ctx)
        assert power(ctx, g, -1) == inv(ctx, g)
    print("✅ Element orders passed")


def run_all_tests():
    """Run the field tests without pytest"""
    print("\n" + "="*60)
    print("FINITE FIELD - VALIDATION TESTS")
    print("="*60)

    try:
        test_moduli()
        test_creation_errors()
        test_arithmetic_examples()
        for p, k in AXIOM_FIELDS:
            test_field_axioms_exhaustive(p, k)
        test_field_axioms_random()
        test_tables_agree_with_field_class()
        test_squares()
        test_element_orders()
        print("\n✅ ALL TESTS PASSED")
        return 0
    except AssertionError as e:
        print(f"\n❌ Test failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(run_all_tests())
