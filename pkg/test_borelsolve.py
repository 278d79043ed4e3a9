"""
Borel Solver Tests

Lattice counts, the Borel-formula enumeration, the rank bounds it reproduces,
the linear-model oracle and the PSL2(25) circle refutation.
"""

import sys
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, settings, strategies as st

try:
    from obstruction.borelsolve import (
        ClassPartition,
        SolverOptions,
        borel_solve,
        build_lattice,
        check_assignment,
        circle_refutation,
        is_feasible,
        lemma1_bound,
        linear_model_check,
        min_feasible_dim,
        parse_partition,
        psl2_class_partition,
        single_block_partition,
        trivial_partition,
    )
    from obstruction.errors import NotFaithful, ObstructionError, RankTooLarge
except ImportError as e:
    print(f"❌ Import error: {e}")
    print("   Run: pip install -r requirements.txt")
    sys.exit(1)


def test_lattice_counts():
    """Gaussian binomial counts and cover sizes"""
    print("\n" + "="*60)
    print("Test: Subgroup Lattices")
    print("="*60)

    L = build_lattice(5, 2)
    assert len(L.of_rank(1)) == 6
    assert len(L.covers[L.full]) == 6

    L = build_lattice(2, 3)
    assert len(L.of_rank(1)) == 7 and len(L.of_rank(2)) == 7

    L = build_lattice(3, 1)
    assert len(L.subgroups) == 2 and L.covers[L.full] == (0,)

    for p, k in [(2, 2), (3, 3), (2, 4), (5, 3)]:
        L = build_lattice(p, k)
        assert len(L.covers[L.full]) == (p ** k - 1) // (p - 1)
        for b, covers in enumerate(L.covers):
            assert all(L.rank(K) == L.rank(b) - 1 for K in covers)

    with pytest.raises(RankTooLarge):
        build_lattice(2, 5)
    print("✅ Lattices passed")


def test_psl2_25_solutions():
    """Two block-swapped assignments with values {-1, 1} and r(A) = -1"""
    print("\n" + "="*60)
    print("Test: PSL2(25) Borel Assignments")
    print("="*60)

    L = build_lattice(5, 2)
    classes = psl2_class_partition(5, 2)
    assert sorted(len(b) for b in classes.blocks) == [3, 3]

    solutions = borel_solve(L, 5, classes)
    assert len(solutions) == 2, f"expected two assignments, got {len(solutions)}"
    block_values = sorted(tuple(s.r(b[0]) for b in classes.blocks) for s in solutions)
    assert block_values == [(-1, 1), (1, -1)]
    assert all(s.r(L.full) == -1 for s in solutions)
    assert all(s.r(0) == 5 for s in solutions)
    print(f"Block values: {block_values}")
    print("✅ PSL2(25) assignments passed")


def test_single_block_examples():
    L = build_lattice(3, 2)
    assert borel_solve(L, 3, single_block_partition(L)) == []

    for p in (2, 3, 5):
        L = build_lattice(p, 1)
        solutions = borel_solve(L, 1)
        assert solutions and all(s.r(L.full) == -1 for s in solutions)


RANK_BOUND_CASES = [(p, k) for p in (2, 3, 5, 7) for k in (1, 2, 3)]
SINGLE_BLOCK_CASES = [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2)]


@pytest.mark.parametrize("p,k", RANK_BOUND_CASES)
def test_min_feasible_dim_matches_rank_bound(p, k):
    expected = k if p == 2 else 2 * k - 1
    assert min_feasible_dim(p, k) == expected, f"(Z_{p})^{k} should first act in dimension {expected}"


@pytest.mark.parametrize("p,k", SINGLE_BLOCK_CASES)
def test_single_block_respects_hyperplane_bound(p, k):
    L = build_lattice(p, k)
    classes = single_block_partition(L)
    bound = lemma1_bound(p, k)
    for n in range(min(bound, 33)):
        assert not is_feasible(L, n, classes), f"(Z_{p})^{k} single block feasible at n={n} < {bound}"


def test_lemma1_bound_values():
    assert lemma1_bound(3, 2) == 7
    assert lemma1_bound(2, 4) == 14
    assert lemma1_bound(2, 1) == 0


def test_assignments_revalidate():
    """Every returned assignment passes the independent checker and is monotone"""
    opts = SolverOptions()
    for p, k, n in [(2, 2, 3), (3, 2, 5), (2, 3, 4), (5, 2, 5)]:
        L = build_lattice(p, k)
        classes = trivial_partition()
        for s in borel_solve(L, n, classes, opts):
            assert check_assignment(L, n, classes, opts, s.values)
            for b, covers in enumerate(L.covers):
                assert all(s.r(K) >= s.r(b) for K in covers)
            if p != 2:
                assert all(v == -1 or (n - v) % 2 == 0 for v in s.values)

    L = build_lattice(3, 2)
    bad = [3] + [1] * (len(L.subgroups) - 1)
    assert not check_assignment(L, 3, trivial_partition(), opts, bad)


def test_solutions_sorted_and_block_symmetric():
    L = build_lattice(5, 2)
    classes = psl2_class_partition(5, 2)
    solutions = borel_solve(L, 5, classes)
    vectors = [s.values for s in solutions]
    assert vectors == sorted(vectors)
    swapped = ClassPartition(blocks=tuple(reversed(classes.blocks)), label="swapped")
    assert sorted(s.values for s in borel_solve(L, 5, swapped)) == vectors


def test_parse_partition():
    L = build_lattice(5, 2)
    assert parse_partition("trivial", L).blocks == ()
    assert parse_partition("auto:psl2(25)", L) == psl2_class_partition(5, 2)
    assert parse_partition("1,2,3|4,5,6", L).blocks == ((1, 2, 3), (4, 5, 6))
    with pytest.raises(ObstructionError):
        parse_partition("auto:psl2(9)", L)
    with pytest.raises(ObstructionError):
        parse_partition("0,1", L)


ORACLE_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)]


def _faithful_matrices(p, k, max_columns, columns_pool=None):
    pool = columns_pool or [v for v in product(range(p), repeat=k) if any(v)]
    for c in range(1, max_columns + 1):
        for columns in combinations_with_replacement(pool, c):
            matrix = [[col[i] for col in columns] for i in range(k)]
            try:
                yield matrix, linear_model_check(p, k, matrix)
            except NotFaithful:
                continue


def _normalized(p, k):
    """One nonzero character per kernel: first nonzero coordinate equal to 1."""
    return [v for v in product(range(p), repeat=k) if any(v) and next(x for x in v if x) == 1]


@pytest.mark.parametrize("p,k", ORACLE_CASES)
def test_linear_model_oracle(p, k):
    """The Borel identities hold on every faithful rotation model"""
    checked = 0
    for matrix, holds in _faithful_matrices(p, k, 4):
        assert holds, f"linear model fails for p={p}, characters {matrix}"
        checked += 1
    assert checked > 0


def test_linear_model_oracle_rank3_mod5_kernels():
    """Every configuration of at most four character kernels of (Z_5)^3"""
    pool = _normalized(5, 3)
    assert len(pool) == 31
    checked = 0
    for matrix, holds in _faithful_matrices(5, 3, 4, pool):
        assert holds, f"linear model fails for characters {matrix}"
        checked += 1
    assert checked > 0


def test_linear_model_scaling_invariance():
    """Scaling a character by a unit leaves the verdict unchanged"""
    base = [[1, 0, 0, 1], [0, 1, 0, 2], [0, 0, 1, 3]]
    for units in product(range(1, 5), repeat=4):
        scaled = [[(row[j] * units[j]) % 5 for j in range(4)] for row in base]
        assert linear_model_check(5, 3, scaled) == linear_model_check(5, 3, base)


@pytest.mark.slow
def test_linear_model_oracle_rank3_mod5_exhaustive():
    for matrix, holds in _faithful_matrices(5, 3, 4):
        assert holds, f"linear model fails for characters {matrix}"


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*(st.integers(0, 4) for _ in range(3))), min_size=3, max_size=4))
def test_linear_model_oracle_rank3_mod5(columns):
    matrix = [[col[i] for col in columns] for i in range(3)]
    try:
        assert linear_model_check(5, 3, matrix)
    except NotFaithful:
        pass


def test_linear_model_examples():
    assert linear_model_check(3, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert linear_model_check(5, 2, [[1, 0], [0, 1]])
    assert linear_model_check(7, 1, [[3]])
    with pytest.raises(NotFaithful):
        linear_model_check(3, 2, [[1, 2], [0, 0]])


def test_circle_refutation():
    """PSL2(25) is refuted at n = 5; PSL2(9) is not"""
    print("\n" + "="*60)
    print("Test: Circle Refutation")
    print("="*60)

    transcript = circle_refutation(5, 2, 5)
    assert transcript.refuted, transcript.reason
    assert transcript.block_sizes == (3, 3)
    assert len(transcript.solutions) == 2

    for n in (3, 4, 5):
        assert not circle_refutation(3, 2, n).refuted, f"PSL2(9) must survive at n={n}"
    print("✅ Circle refutation passed")


def run_all_tests():
    """Run the solver tests without pytest"""
    print("\n" + "="*60)
    print("BOREL SOLVER - VALIDATION TESTS")
    print("="*60)

    try:
        test_lattice_counts()
        test_psl2_25_solutions()
        test_single_block_examples()
        for p, k in RANK_BOUND_CASES:
            test_min_feasible_dim_matches_rank_bound(p, k)
        for p, k in SINGLE_BLOCK_CASES:
            test_single_block_respects_hyperplane_bound(p, k)
        test_lemma1_bound_values()
        test_assignments_revalidate()
        test_solutions_sorted_and_block_symmetric()
        test_parse_partition()
        for p, k in ORACLE_CASES:
            test_linear_model_oracle(p, k)
        test_linear_model_oracle_rank3_mod5_kernels()
        test_linear_model_scaling_invariance()
        test_linear_model_oracle_rank3_mod5()
        test_linear_model_examples()
        test_circle_refutation()
        print("\n✅ ALL TESTS PASSED")
        return 0
    except AssertionError as e:
        print(f"\n❌ Test failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(run_all_tests())
