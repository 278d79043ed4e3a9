"""
Borel Formula Solver

Enumerates the fixed-point dimension assignments r(B) over the subgroup lattice
of (Z_p)^k that are compatible with the Borel formula

    n - r(B) = sum over index-p subgroups K of B of (r(K) - r(B))

together with Smith parity, faithfulness, monotonicity and a conjugacy-forced
class partition. The model is solved with cpmpy on the OR-Tools backend; every
assignment the solver returns is re-validated by a plain Python checker.
"""

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, product
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import cpmpy as cp

from . import matgroup
from .errors import NotFaithful, ObstructionError, RankTooLarge
from .gfield import field_create

logger = logging.getLogger(__name__)

MAX_RANK = 4
MAX_DIM = 32
SOLUTION_LIMIT = 10 ** 4

Basis = Tuple[Tuple[int, ...], ...]


# =============================================================================
# Subgroup lattice of (Z_p)^k
# =============================================================================

def _rref(vectors: Sequence[Sequence[int]], p: int) -> Basis:
    rows = [list(v) for v in vectors]
    if not rows:
        return ()
    width = len(rows[0])
    pivot_row = 0
    for col in range(width):
        pivot = next((r for r in range(pivot_row, len(rows)) if rows[r][col] % p), None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        inv = pow(rows[pivot_row][col], -1, p)
        rows[pivot_row] = [(x * inv) % p for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return tuple(tuple(row) for row in rows[:pivot_row])


def _rref_bases(p: int, k: int, rank: int) -> List[Basis]:
    bases = []
    for pivots in combinations(range(k), rank):
        free = [(i, c) for i, piv in enumerate(pivots) for c in range(piv + 1, k) if c not in pivots]
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * k for _ in range(rank)]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, c), v in zip(free, values):
                rows[i][c] = v
            bases.append(tuple(tuple(row) for row in rows))
    return sorted(bases)


@dataclass(frozen=True)
class Lattice:
    """All subgroups of (Z_p)^k, indexed by (rank, row-reduced basis)."""
    p: int
    k: int
    subgroups: Tuple[Basis, ...]
    covers: Tuple[Tuple[int, ...], ...]
    index: Dict[Basis, int] = field(compare=False, repr=False, hash=False)

    def rank(self, i: int) -> int:
        return len(self.subgroups[i])

    def of_rank(self, rank: int) -> List[int]:
        return [i for i in range(len(self.subgroups)) if self.rank(i) == rank]

    @property
    def full(self) -> int:
        return len(self.subgroups) - 1

    def locate(self, vectors: Sequence[Sequence[int]]) -> int:
        return self.index[_rref(vectors, self.p)]


def _index_p_subgroups(basis: Basis, p: int) -> List[Basis]:
    """Kernels of the nonzero functionals on the span of basis, one per line of functionals."""
    r = len(basis)
    kernels = []
    for f in product(range(p), repeat=r):
        lead = next((j for j, x in enumerate(f) if x), None)
        if lead is None or f[lead] != 1:
            continue
        vectors = []
        for i in range(r):
            if i == lead:
                continue
            coeff = [0] * r
            coeff[i] = 1
            coeff[lead] = (-f[i]) % p
            vectors.append([sum(c * b[t] for c, b in zip(coeff, basis)) % p for t in range(len(basis[0]))])
        kernels.append(_rref(vectors, p))
    return kernels


@lru_cache(maxsize=None)
def build_lattice(p: int, k: int) -> Lattice:
    """
    Build the complete subgroup lattice of (Z_p)^k.

    Raises:
        RankTooLarge: if k is outside 1..4
    """
    if not 1 <= k <= MAX_RANK:
        raise RankTooLarge(k)
    subgroups: List[Basis] = []
    for rank in range(k + 1):
        subgroups.extend(_rref_bases(p, k, rank))
    index = {b: i for i, b in enumerate(subgroups)}
    covers = tuple(
        tuple(sorted(index[K] for K in _index_p_subgroups(b, p))) if b else ()
        for b in subgroups
    )
    logger.debug(f"Lattice of (Z_{p})^{k}: {len(subgroups)} subgroups")
    return Lattice(p=p, k=k, subgroups=tuple(subgroups), covers=covers, index=index)


# =============================================================================
# Partitions and options
# =============================================================================

@dataclass(frozen=True)
class ClassPartition:
    """Blocks of same-rank subgroups forced to share a fixed-point dimension."""
    blocks: Tuple[Tuple[int, ...], ...] = ()
    label: str = "trivial"

    def validate(self, L: Lattice) -> None:
        seen = set()
        for block in self.blocks:
            if len({L.rank(i) for i in block}) > 1:
                raise ObstructionError(f"partition block {block} mixes subgroup ranks")
            if seen.intersection(block):
                raise ObstructionError(f"partition block {block} overlaps another block")
            seen.update(block)


@dataclass(frozen=True)
class SolverOptions:
    orientation_preserving: bool = True
    strict_faithful: bool = True
    euler_rule: bool = True
    strict_gap: bool = False


@dataclass(frozen=True)
class FixAssignment:
    n: int
    values: Tuple[int, ...]

    def r(self, i: int) -> int:
        return self.values[i]


def trivial_partition() -> ClassPartition:
    return ClassPartition()


def single_block_partition(L: Lattice) -> ClassPartition:
    """All index-p subgroups of the full group in one block."""
    return ClassPartition(blocks=(tuple(L.covers[L.full]),), label="single")


def rank_block_partition(L: Lattice) -> ClassPartition:
    blocks = tuple(tuple(L.of_rank(rank)) for rank in range(1, L.k) if L.of_rank(rank))
    return ClassPartition(blocks=blocks, label="rank")


@lru_cache(maxsize=None)
def psl2_class_partition(p: int, k: int) -> ClassPartition:
    """
    Partition of the cyclic subgroups of the Borel translation part of PSL_2(p^k)
    into PSL_2-conjugacy classes, mapped onto the lattice of (Z_p)^k.
    """
    ctx = field_create(p, k)
    L = build_lattice(p, k)
    B = matgroup.borel_subgroup(ctx)
    G = B.parent
    blocks = []
    for block in matgroup.cyclic_subgroup_classes(B, G):
        members = set()
        for H in block:
            x = min(H - {0})
            sigma = G.elements[x][1]
            members.add(L.locate([ctx.decode(sigma)]))
        blocks.append(tuple(sorted(members)))
    return ClassPartition(blocks=tuple(sorted(blocks)), label=f"auto:psl2({ctx.q})")


_PSL2_SPEC = re.compile(r"^auto:psl2\((\d+)\)$")


def parse_partition(text: str, L: Lattice) -> ClassPartition:
    """Read `trivial`, `single`, `rank`, `auto:psl2(q)` or explicit `a,b|c,d` lattice indices."""
    text = text.strip()
    if text in ("", "trivial"):
        return trivial_partition()
    if text == "single":
        return single_block_partition(L)
    if text == "rank":
        return rank_block_partition(L)
    match = _PSL2_SPEC.match(text)
    if match:
        q = int(match.group(1))
        if q != L.p ** L.k:
            raise ObstructionError(f"partition {text} does not match lattice of (Z_{L.p})^{L.k}")
        return psl2_class_partition(L.p, L.k)
    try:
        blocks = tuple(tuple(int(x) for x in part.split(",")) for part in text.split("|"))
    except ValueError as exc:
        raise ObstructionError(f"cannot parse partition {text!r}") from exc
    if any(not 0 <= i < len(L.subgroups) for block in blocks for i in block):
        raise ObstructionError(f"partition {text!r} names subgroups outside the lattice")
    partition = ClassPartition(blocks=blocks, label="explicit")
    partition.validate(L)
    return partition


# =============================================================================
# Constraint rules shared by the model and the checker
# =============================================================================

def _parity_applies(L: Lattice, i: int, opts: SolverOptions) -> bool:
    if not opts.orientation_preserving or i == 0:
        return False
    return L.p != 2 or L.rank(i) == 1


def _must_be_nonempty(L: Lattice, n: int, i: int, opts: SolverOptions) -> bool:
    if not opts.euler_rule or n % 2 or i == 0:
        return False
    return L.p != 2 or L.rank(i) == 1


def _allowed_values(L: Lattice, n: int, i: int, opts: SolverOptions) -> List[int]:
    if i == 0:
        return [n]
    top = n - 1 if opts.strict_faithful else n
    values = range(0 if _must_be_nonempty(L, n, i, opts) else -1, top + 1)
    if _parity_applies(L, i, opts):
        values = [v for v in values if v == -1 or (n - v) % 2 == 0]
    return list(values)


def check_assignment(L: Lattice, n: int, classes: ClassPartition, opts: SolverOptions,
                     assignment: Sequence[int]) -> bool:
    """Evaluate every constraint from scratch on a single assignment."""
    r = list(assignment)
    if len(r) != len(L.subgroups):
        return False
    for i in range(len(r)):
        if r[i] not in _allowed_values(L, n, i, opts):
            return False
    for block in classes.blocks:
        if len({r[i] for i in block}) > 1:
            return False
    for b, covers in enumerate(L.covers):
        for K in covers:
            if r[K] < r[b]:
                return False
            if opts.strict_gap and L.p != 2 and r[K] - r[b] < 2:
                return False
        if L.rank(b) >= 2 and n - r[b] != sum(r[K] - r[b] for K in covers):
            return False
    return True


def _model(L: Lattice, n: int, classes: ClassPartition, opts: SolverOptions):
    """The cpmpy model and its variables, or (None, []) when some domain is empty."""
    domains = [_allowed_values(L, n, i, opts) for i in range(len(L.subgroups))]
    if not all(domains):
        return None, []
    r = [cp.intvar(-1, n, name=f"r{i}") for i in range(len(L.subgroups))]
    model = cp.Model()
    for var, allowed in zip(r, domains):
        model += cp.Table([var], [[v] for v in allowed])
    for block in classes.blocks:
        model += [r[i] == r[block[0]] for i in block[1:]]
    for b, covers in enumerate(L.covers):
        for K in covers:
            model += r[K] >= r[b]
            if opts.strict_gap and L.p != 2:
                model += r[K] - r[b] >= 2
        if L.rank(b) >= 2:
            model += (n - r[b]) == cp.sum([r[K] - r[b] for K in covers])
    return model, r


def borel_solve(L: Lattice, n: int, classes: Optional[ClassPartition] = None,
                opts: Optional[SolverOptions] = None,
                solution_limit: int = SOLUTION_LIMIT) -> List[FixAssignment]:
    """
    All fixed-point assignments compatible with the Borel identities, in
    lexicographic order of the assignment vector.

    An empty list means the parameters are infeasible.
    """
    if not 0 <= n <= MAX_DIM:
        raise ObstructionError(f"ambient dimension {n} outside 0..{MAX_DIM}")
    classes = classes or trivial_partition()
    opts = opts or SolverOptions()
    classes.validate(L)
    model, r = _model(L, n, classes, opts)
    if model is None:
        return []

    found = set()

    def collect():
        found.add(tuple(int(v.value()) for v in r))

    model.solveAll(solution_limit=solution_limit, display=collect)
    if len(found) >= solution_limit:
        logger.warning(f"Borel enumeration for (Z_{L.p})^{L.k}, n={n} stopped at {solution_limit} solutions")

    solutions = []
    for values in sorted(found):
        if not check_assignment(L, n, classes, opts, values):
            logger.error(f"Solver returned an assignment that fails re-validation: {values}")
            raise ObstructionError(f"invalid solver assignment for (Z_{L.p})^{L.k} at n={n}")
        solutions.append(FixAssignment(n=n, values=values))
    logger.debug(f"(Z_{L.p})^{L.k}, n={n}, partition {classes.label}: {len(solutions)} assignments")
    return solutions


def is_feasible(L: Lattice, n: int, classes: Optional[ClassPartition] = None,
                opts: Optional[SolverOptions] = None) -> bool:
    model, _ = _model(L, n, classes or trivial_partition(), opts or SolverOptions())
    return model is not None and bool(model.solve())


def min_feasible_dim(p: int, k: int, classes: Optional[ClassPartition] = None,
                     opts: Optional[SolverOptions] = None) -> Optional[int]:
    """Smallest n <= 32 admitting an assignment, or None."""
    L = build_lattice(p, k)
    for n in range(MAX_DIM + 1):
        if is_feasible(L, n, classes, opts):
            return n
    return None


# =============================================================================
# Closed-form companions
# =============================================================================

def lemma1_bound(p: int, k: int) -> int:
    """Smallest n with 2^k <= n + 2 (p = 2) or (p^k - 1)/(p - 1) <= (n + 1)/2 (odd p)."""
    if p == 2:
        return max(0, 2 ** k - 2)
    return 2 * ((p ** k - 1) // (p - 1)) - 1


def linear_model_check(p: int, k: int, characters: Sequence[Sequence[int]]) -> bool:
    """
    Evaluate the Borel identities on the rotation action with the given
    coordinate characters (a k x c matrix mod p) on the sphere of dimension 2c - 1.

    Raises:
        NotFaithful: if the characters have a common nontrivial kernel
    """
    columns = [tuple(row[j] % p for row in characters) for j in range(len(characters[0]))]
    if len(_rref(columns, p)) != k:
        raise NotFaithful(f"characters over Z_{p} do not separate (Z_{p})^{k}")
    L = build_lattice(p, k)
    n = 2 * len(columns) - 1

    def fixed_dim(i: int) -> int:
        basis = L.subgroups[i]
        vanishing = sum(1 for chi in columns if all(sum(a * b for a, b in zip(v, chi)) % p == 0 for v in basis))
        return 2 * vanishing - 1

    r = [fixed_dim(i) for i in range(len(L.subgroups))]
    for b, covers in enumerate(L.covers):
        if L.rank(b) >= 2 and n - r[b] != sum(r[K] - r[b] for K in covers):
            logger.error(f"Borel identity fails in the linear model at subgroup {L.subgroups[b]}")
            return False
    return True


# =============================================================================
# Circle refutation for PSL_2(p^k)
# =============================================================================

@dataclass(frozen=True)
class CircleTranscript:
    """Outcome of the Borel-plus-circle argument for PSL_2(p^k) at dimension n."""
    p: int
    k: int
    n: int
    block_sizes: Tuple[int, ...]
    solutions: Tuple[Tuple[int, ...], ...]
    refuted: bool
    reason: str
    quotient_orders: Tuple[int, ...] = ()


def _block_values(sol: FixAssignment, classes: ClassPartition) -> Tuple[int, ...]:
    return tuple(sol.r(block[0]) for block in classes.blocks)


@lru_cache(maxsize=None)
def _circle_quotient(p: int, k: int, lattice_index: int) -> Tuple[int, bool]:
    """
    For the cyclic subgroup H at lattice_index, the order of C/H with C the
    normalizer of H in the Borel subgroup, and whether some quotient of C/H by a
    normal subgroup not containing the translation image is cyclic or dihedral.
    """
    ctx = field_create(p, k)
    L = build_lattice(p, k)
    B = matgroup.borel_subgroup(ctx)
    G = B.parent
    vector = L.subgroups[lattice_index][0]
    algebra = G.algebra
    generator = G.index[algebra.canonical((1, ctx.encode(vector), 0, 1))]
    H = matgroup.closure_indices(G, [generator])
    C = matgroup.normalizer(G, H, B.indices)
    T = frozenset(i for i in B.indices if i == 0 or G.element_order(i) == p)

    C_table = matgroup.subgroup_table(matgroup.SubgroupHandle(G, C))
    local = {C_table.index[G.elements[i]] for i in H}
    Q = matgroup.quotient_table(C_table, frozenset(local))
    rep = Q.algebra.rep
    T_image = frozenset(Q.index[rep[C_table.index[G.elements[t]]]] for t in T if G.elements[t] in C_table.index)

    for N in matgroup.normal_subgroups(Q):
        if T_image <= N:
            continue
        if matgroup.is_cyclic_or_dihedral(matgroup.quotient_table(Q, N)):
            return Q.order, True
    return Q.order, False


def circle_refutation(p: int, k: int, n: int) -> CircleTranscript:
    """
    Decide whether PSL_2(p^k) is excluded at dimension n by the Borel solver
    with the PSL_2 class partition and the circle action of a normalizer quotient.

    Refuted when no assignment exists, or when every assignment has r(A) = -1
    and puts some class of cyclic subgroups on a circle whose normalizer
    quotient admits no faithful cyclic or dihedral image.
    """
    L = build_lattice(p, k)
    classes = psl2_class_partition(p, k)
    solutions = borel_solve(L, n, classes)
    blocks = tuple(len(b) for b in classes.blocks)
    transcript = [_block_values(s, classes) + (s.r(L.full),) for s in solutions]

    if not solutions:
        return CircleTranscript(p, k, n, blocks, (), True, "no compatible fixed-point assignment")

    orders = []
    for sol, values in zip(solutions, transcript):
        if sol.r(L.full) != -1:
            return CircleTranscript(p, k, n, blocks, tuple(transcript), False,
                                    f"assignment with nonempty r(A) = {sol.r(L.full)}")
        circle_blocks = [b for b in classes.blocks if sol.r(b[0]) == 1]
        if not circle_blocks:
            return CircleTranscript(p, k, n, blocks, tuple(transcript), False,
                                    "assignment without a circle fixed set")
        escapes = False
        for block in circle_blocks:
            order, acts = _circle_quotient(p, k, block[0])
            orders.append(order)
            escapes = escapes or acts
        if escapes:
            return CircleTranscript(p, k, n, blocks, tuple(transcript), False,
                                    "normalizer quotient can act on the circle", tuple(orders))
    return CircleTranscript(p, k, n, blocks, tuple(transcript), True,
                            "normalizer quotient cannot act faithfully on the circle", tuple(orders))
