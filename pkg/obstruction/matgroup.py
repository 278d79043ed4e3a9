"""
Matrix Groups over Finite Fields

Brute-force construction and analysis of the small groups the obstruction
arguments touch concretely: SL_m(q) and PSL_m(q), Borel and translation
subgroups, symplectic embeddings, and structure oracles (conjugacy classes,
normal subgroups, cyclic/dihedral detection, O(3) x O(2) embeddability,
quaternion subgroups).

Groups are held as GroupTable objects over an element algebra. Elements are
hashable tuples (matrix entries as integer field codes, or permutation images).
"""

import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Protocol, Sequence, Tuple

import galois
import numpy as np

from .errors import CapExceeded, NotUnimodular, ObstructionError
from .gfield import TABLE_LIMIT, FieldCtx, FieldElem, from_int

logger = logging.getLogger(__name__)

CLOSURE_CAP = 10 ** 6
SUBGROUP_SEARCH_CAP = 10 ** 5
CYCLIC_DIHEDRAL_CAP = 10 ** 4
O3XO2_CAP = 10 ** 3

Element = Hashable


class Algebra(Protocol):
    identity: Element

    def mul(self, a: Element, b: Element) -> Element: ...

    def inverse(self, a: Element) -> Element: ...


# =============================================================================
# Element algebras
# =============================================================================

class MatrixAlgebra:
    """m x m matrices over GF(q) as row-major tuples of field codes.

    With projective=True every product is reduced to the lexicographically
    least representative of its orbit under the scalars c with c^m = 1.
    """

    def __init__(self, ctx: FieldCtx, m: int, projective: bool = False):
        if not ctx.tabulated:
            raise CapExceeded(TABLE_LIMIT, "field order for matrix arithmetic")
        self.ctx = ctx
        self.m = m
        self.projective = projective
        self._add = ctx._add_table
        self._mul = ctx._mul_table
        self.scalars = [c for c in range(1, ctx.q) if ctx.pow_code(c, m) == 1]
        ident = tuple(1 if i == j else 0 for i in range(m) for j in range(m))
        self.identity = self.canonical(ident)

    def canonical(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        if not self.projective or len(self.scalars) == 1:
            return a
        mul = self._mul
        return min(tuple(mul[c][x] for x in a) for c in self.scalars)

    def raw_mul(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        m = self.m
        add, mul = self._add, self._mul
        out = []
        for i in range(m):
            row = a[i * m:(i + 1) * m]
            for j in range(m):
                s = 0
                for t in range(m):
                    x = row[t]
                    if x:
                        y = b[t * m + j]
                        if y:
                            s = add[s][mul[x][y]]
                out.append(s)
        return tuple(out)

    def mul(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        return self.canonical(self.raw_mul(a, b))

    def _array(self, a: Tuple[int, ...]) -> galois.FieldArray:
        return self.ctx.galois_field(np.array(a, dtype=np.int64).reshape(self.m, self.m))

    def det(self, a: Tuple[int, ...]) -> int:
        return int(np.linalg.det(self._array(a)))

    def raw_inverse(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        try:
            inverse = np.linalg.inv(self._array(a))
        except np.linalg.LinAlgError as exc:
            raise NotUnimodular("singular matrix has no inverse") from exc
        return tuple(inverse.view(np.ndarray).ravel().tolist())

    def inverse(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        return self.canonical(self.raw_inverse(a))

    def transpose(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        m = self.m
        return tuple(a[j * m + i] for i in range(m) for j in range(m))

    def elementary(self, i: int, j: int, c: int) -> Tuple[int, ...]:
        """Transvection I + c * E_ij."""
        m = self.m
        entries = [1 if r == s else 0 for r in range(m) for s in range(m)]
        entries[i * m + j] = c
        return self.canonical(tuple(entries))

    def diag(self, values: Sequence[int]) -> Tuple[int, ...]:
        m = self.m
        return self.canonical(tuple(values[r] if r == s else 0 for r in range(m) for s in range(m)))


class PermutationAlgebra:
    """Permutations of range(degree); (a * b)[i] = a[b[i]]."""

    def __init__(self, degree: int):
        self.degree = degree
        self.identity = tuple(range(degree))

    def mul(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(a[i] for i in b)

    def inverse(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        out = [0] * len(a)
        for i, x in enumerate(a):
            out[x] = i
        return tuple(out)


class QuotientAlgebra:
    """Cosets of a normal subgroup, each represented by its least parent index."""

    def __init__(self, parent: "GroupTable", normal: FrozenSet[int]):
        self.parent = parent
        self.normal = normal
        rep: Dict[int, int] = {}
        for x in range(parent.order):
            if x in rep:
                continue
            coset = [parent.mult(x, n) for n in normal]
            low = min(coset)
            for y in coset:
                rep[y] = low
        self.rep = rep
        self.identity = 0

    def mul(self, a: int, b: int) -> int:
        return self.rep[self.parent.mult(a, b)]

    def inverse(self, a: int) -> int:
        return self.rep[self.parent.inv(a)]


# =============================================================================
# Group tables and subgroups
# =============================================================================

class GroupTable:
    """A fully enumerated finite group; the identity sits at index 0."""

    def __init__(self, algebra: Algebra, elements: List[Element], generators: Sequence[int]):
        self.algebra = algebra
        self.elements = elements
        self.index: Dict[Element, int] = {e: i for i, e in enumerate(elements)}
        self.generators = list(generators)
        self._inv: Dict[int, int] = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    def mult(self, i: int, j: int) -> int:
        return self.index[self.algebra.mul(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        cached = self._inv.get(i)
        if cached is None:
            cached = self.index[self.algebra.inverse(self.elements[i])]
            self._inv[i] = cached
        return cached

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return self.mult(self.mult(g, x), self.inv(g))

    def element_order(self, i: int) -> int:
        n, x = 1, i
        while x != 0:
            x = self.mult(x, i)
            n += 1
        return n

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.mult(a, b) == self.mult(b, a) for a in gens for b in gens)


@dataclass(frozen=True)
class SubgroupHandle:
    parent: GroupTable = field(compare=False, repr=False)
    indices: FrozenSet[int] = frozenset()

    @property
    def order(self) -> int:
        return len(self.indices)

    def __contains__(self, i: int) -> bool:
        return i in self.indices

    def elements(self) -> List[Element]:
        return [self.parent.elements[i] for i in sorted(self.indices)]


def group_closure(gens: Sequence[Element], cap: int, algebra: Algebra) -> GroupTable:
    """
    Breadth-first closure of the generators under right multiplication.

    Element order is deterministic: identity first, then insertion order
    driven by the sorted generator list.

    Raises:
        CapExceeded: if the group has more than cap elements
    """
    identity = algebra.identity
    ordered = sorted({g for g in gens if g != identity})
    elements: List[Element] = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in ordered:
            y = algebra.mul(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise CapExceeded(cap)
                queue.append(y)
    gen_indices = [index[g] for g in ordered]
    return GroupTable(algebra, elements, gen_indices)


def closure_indices(G: GroupTable, gens: Iterable[int]) -> FrozenSet[int]:
    """Subgroup of G generated by the given element indices."""
    gens = sorted(set(gens) - {0})
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = G.mult(x, g)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def generating_set(G: GroupTable, indices: Iterable[int]) -> List[int]:
    gens: List[int] = []
    span = frozenset({0})
    for i in sorted(indices):
        if i not in span:
            gens.append(i)
            span = closure_indices(G, gens)
    return gens


def subgroup_table(H: SubgroupHandle) -> GroupTable:
    """Re-index a subgroup as a standalone GroupTable over the same algebra."""
    G = H.parent
    ordered = sorted(H.indices)
    elements = [G.elements[i] for i in ordered]
    local = {g: n for n, g in enumerate(ordered)}
    gens = [local[g] for g in generating_set(G, ordered)]
    return GroupTable(G.algebra, elements, gens)


def quotient_table(G: GroupTable, normal: FrozenSet[int]) -> GroupTable:
    algebra = QuotientAlgebra(G, normal)
    gens = [algebra.rep[g] for g in G.generators]
    return group_closure(gens, G.order, algebra)


# =============================================================================
# Conjugacy and normal structure
# =============================================================================

def _orbit(G: GroupTable, start: int, actors: Sequence[int]) -> List[int]:
    seen = {start}
    orbit = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in actors:
            y = G.conj(g, x)
            if y not in seen:
                seen.add(y)
                orbit.append(y)
                queue.append(y)
    return orbit


def conjugacy_classes(G: GroupTable) -> List[List[int]]:
    """Partition of element indices into conjugacy classes, ordered by least member."""
    if G.order > CLOSURE_CAP:
        raise CapExceeded(CLOSURE_CAP, "conjugacy class enumeration")
    assigned = [False] * G.order
    classes = []
    for x in range(G.order):
        if assigned[x]:
            continue
        orbit = _orbit(G, x, G.generators)
        for y in orbit:
            assigned[y] = True
        classes.append(sorted(orbit))
    return classes


def involutions(G: GroupTable) -> List[int]:
    return [i for i in range(1, G.order) if G.mult(i, i) == 0]


def involution_class_count(G: GroupTable) -> int:
    """Number of conjugacy classes of involutions, via orbits of involutions only."""
    remaining = set(involutions(G))
    count = 0
    while remaining:
        start = min(remaining)
        remaining.difference_update(_orbit(G, start, G.generators))
        count += 1
    return count


def normal_closure(G: GroupTable, indices: Iterable[int]) -> FrozenSet[int]:
    seeds = set()
    for x in indices:
        seeds.update(_orbit(G, x, G.generators))
    return closure_indices(G, seeds)


def normal_subgroups(G: GroupTable) -> List[FrozenSet[int]]:
    """All normal subgroups, as joins of normal closures of conjugacy classes."""
    minimal = {normal_closure(G, cls) for cls in conjugacy_classes(G)}
    found = {frozenset({0})}
    frontier = list(found)
    while frontier:
        nxt = []
        for N in frontier:
            for M in minimal:
                if M <= N:
                    continue
                J = frozenset(G.mult(a, b) for a in N for b in M)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def derived_subgroup(G: GroupTable) -> FrozenSet[int]:
    gens = G.generators
    commutators = [G.mult(G.mult(a, b), G.mult(G.inv(a), G.inv(b))) for a in gens for b in gens]
    return normal_closure(G, commutators)


def center(G: GroupTable) -> FrozenSet[int]:
    return frozenset(x for x in range(G.order) if all(G.mult(x, g) == G.mult(g, x) for g in G.generators))


def normalizer(G: GroupTable, subgroup: FrozenSet[int], within: Iterable[int]) -> FrozenSet[int]:
    return frozenset(g for g in within if all(G.conj(g, h) in subgroup for h in subgroup))


# =============================================================================
# Builders
# =============================================================================

def sl_generators(ctx: FieldCtx, m: int, algebra: Optional[MatrixAlgebra] = None) -> List[Tuple[int, ...]]:
    """Adjacent transvections E_{i,i+1}(x^t), E_{i+1,i}(x^t) for t < k."""
    algebra = algebra or MatrixAlgebra(ctx, m)
    basis = [ctx.pow_code(ctx.encode((0, 1) + (0,) * (ctx.k - 2)) if ctx.k > 1 else 1, t) for t in range(ctx.k)]
    gens = []
    for i in range(m - 1):
        for c in basis:
            gens.append(algebra.elementary(i, i + 1, c))
            gens.append(algebra.elementary(i + 1, i, c))
    return gens


LINEAR_GROUP_CACHE_SIZE = 32


def linear_group_order(q: int, m: int, projective: bool) -> int:
    order = q ** (m * (m - 1) // 2)
    for i in range(2, m + 1):
        order *= q ** i - 1
    return order // gcd(m, q - 1) if projective else order


@lru_cache(maxsize=LINEAR_GROUP_CACHE_SIZE)
def _enumerate_linear_group(ctx: FieldCtx, m: int, projective: bool) -> GroupTable:
    algebra = MatrixAlgebra(ctx, m, projective=projective)
    name = f"{'PSL' if projective else 'SL'}_{m}({ctx.q})"
    logger.info(f"Enumerating {name}")
    G = group_closure(sl_generators(ctx, m, algebra), linear_group_order(ctx.q, m, projective), algebra)
    logger.info(f"{name} has order {G.order}")
    return G


def _linear_group(ctx: FieldCtx, m: int, projective: bool, cap: int) -> GroupTable:
    if linear_group_order(ctx.q, m, projective) > cap:
        raise CapExceeded(cap)
    return _enumerate_linear_group(ctx, m, projective)


def sl_group(ctx: FieldCtx, m: int, cap: int = CLOSURE_CAP) -> GroupTable:
    return _linear_group(ctx, m, False, cap)


def psl_group(ctx: FieldCtx, m: int, cap: int = CLOSURE_CAP) -> GroupTable:
    return _linear_group(ctx, m, True, cap)


def permutation_group(gens: Sequence[Sequence[int]], degree: int, cap: int = CLOSURE_CAP) -> GroupTable:
    return group_closure([tuple(g) for g in gens], cap, PermutationAlgebra(degree))


def cyclic_group(n: int) -> GroupTable:
    return permutation_group([[(i + 1) % n for i in range(n)]], n)


def dihedral_group(n: int) -> GroupTable:
    """Dihedral group of order 2n."""
    if n == 1:
        return cyclic_group(2)
    if n == 2:
        return permutation_group([[1, 0, 3, 2], [2, 3, 0, 1]], 4)
    rotation = [(i + 1) % n for i in range(n)]
    reflection = [(-i) % n for i in range(n)]
    return permutation_group([rotation, reflection], n)


def metacyclic_group(p: int, q: int) -> GroupTable:
    """Z_p semidirect Z_q acting on Z_p by multiplication with a unit of order q."""
    unit = next(y for y in range(2, p) if pow(y, q, p) == 1 and all(pow(y, d, p) != 1 for d in range(1, q)))
    translation = [(i + 1) % p for i in range(p)]
    scaling = [(unit * i) % p for i in range(p)]
    return permutation_group([translation, scaling], p)


def quaternion_group() -> GroupTable:
    """Q8 inside SL_2(3), generated by i = [[0,2],[1,0]] and j = [[1,1],[1,2]]."""
    from .gfield import field_create
    algebra = MatrixAlgebra(field_create(3, 1), 2)
    return group_closure([(0, 2, 1, 0), (1, 1, 1, 2)], 8, algebra)


def _times_c2(gens: Sequence[Sequence[int]], degree: int) -> GroupTable:
    extended = [list(g) + [degree, degree + 1] for g in gens]
    swap = list(range(degree)) + [degree + 1, degree]
    return permutation_group(extended + [swap], degree + 2)


# =============================================================================
# Structure oracles
# =============================================================================

def is_cyclic_or_dihedral(G: GroupTable) -> bool:
    """True iff G is cyclic or has a cyclic index-2 subgroup inverted by an outside involution."""
    n = G.order
    if n > CYCLIC_DIHEDRAL_CAP:
        raise CapExceeded(CYCLIC_DIHEDRAL_CAP, "cyclic/dihedral test")
    orders = [G.element_order(i) for i in range(n)]
    if n in orders:
        return True
    if n % 2:
        return False
    invs = [i for i in range(1, n) if orders[i] == 2]
    seen: set = set()
    for c in range(n):
        if orders[c] != n // 2:
            continue
        cyclic = closure_indices(G, [c])
        if cyclic in seen:
            continue
        seen.add(cyclic)
        c_inv = G.inv(c)
        if any(t not in cyclic and G.conj(t, c) == c_inv for t in invs):
            return True
    return False


def invariants(G: GroupTable) -> Tuple[int, int, Tuple[int, ...]]:
    """(order, abelianization order, sorted element orders)."""
    derived = derived_subgroup(G)
    return (G.order, G.order // len(derived), tuple(sorted(G.element_order(i) for i in range(G.order))))


@lru_cache(maxsize=None)
def _o3_invariants(order: int) -> FrozenSet[Tuple[int, int, Tuple[int, ...]]]:
    """Invariants of the finite O(3) subgroup types of the given order."""
    builds: List[GroupTable] = [cyclic_group(order)] if order > 1 else [permutation_group([], 1)]
    if order % 2 == 0:
        half = order // 2
        builds.append(dihedral_group(half))
        builds.append(_times_c2([[(i + 1) % half for i in range(half)]], half))
        if order % 4 == 0:
            quarter = order // 4
            D = dihedral_group(quarter)
            degree = len(D.elements[0])
            builds.append(_times_c2([D.elements[g] for g in D.generators], degree))
    for size, base in _POLYHEDRAL.values():
        if order == size:
            builds.append(permutation_group(base, len(base[0])))
        elif order == 2 * size:
            builds.append(_times_c2(base, len(base[0])))
    return frozenset(invariants(B) for B in builds)


# name -> (order, permutation generators)
_POLYHEDRAL = {
    "A4": (12, [[1, 2, 0, 3], [0, 2, 3, 1]]),
    "S4": (24, [[1, 2, 3, 0], [1, 0, 2, 3]]),
    "A5": (60, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]]),
}


def is_o3_type(G: GroupTable) -> bool:
    return invariants(G) in _o3_invariants(G.order)


def embeds_in_O3xO2(G: GroupTable) -> bool:
    """
    Decide whether G embeds in O(3) x O(2).

    An embedding is a pair of kernels (K3, K2) with trivial intersection such
    that G/K3 is a finite O(3) type and G/K2 is cyclic or dihedral.
    """
    if G.order > O3XO2_CAP:
        raise CapExceeded(O3XO2_CAP, "O(3) x O(2) embedding test")
    normals = normal_subgroups(G)
    o2_kernels = [N for N in normals if is_cyclic_or_dihedral(quotient_table(G, N))]
    o3_kernels = [N for N in normals if is_o3_type(quotient_table(G, N))]
    return any(len(K3 & K2) == 1 for K3 in o3_kernels for K2 in o2_kernels)


def find_quaternion_subgroup(G: GroupTable, cap: int = SUBGROUP_SEARCH_CAP) -> Optional[SubgroupHandle]:
    """Search pairs x, y of order 4 with x^2 = y^2 central and y x y^-1 = x^-1."""
    if G.order > cap:
        raise CapExceeded(cap, "quaternion subgroup search")
    order4 = [i for i in range(1, G.order) if G.element_order(i) == 4]
    for x in order4:
        x2 = G.mult(x, x)
        if any(G.mult(x2, g) != G.mult(g, x2) for g in G.generators):
            continue
        x_inv = G.inv(x)
        cyclic = {0, x, x2, x_inv}
        for y in order4:
            if y in cyclic or G.mult(y, y) != x2 or G.conj(y, x) != x_inv:
                continue
            H = closure_indices(G, [x, y])
            if len(H) == 8:
                return SubgroupHandle(G, H)
    return None


# =============================================================================
# Borel and translation subgroups of linear groups
# =============================================================================

def borel_subgroup(ctx: FieldCtx, cap: int = CLOSURE_CAP) -> SubgroupHandle:
    """
    Upper triangular subgroup of PSL_2(q), of order q * r with r = (q-1)/2
    for odd p and r = q - 1 for p = 2.
    """
    G = psl_group(ctx, 2, cap)
    indices = frozenset(i for i, e in enumerate(G.elements) if e[2] == 0)
    r = (ctx.q - 1) // 2 if ctx.p != 2 else ctx.q - 1
    if len(indices) != ctx.q * r:
        raise ObstructionError(f"Borel subgroup of PSL_2({ctx.q}) has order {len(indices)}, expected {ctx.q * r}")
    return SubgroupHandle(G, indices)


def order_p_class_structure(B: SubgroupHandle) -> List[Tuple[int, int]]:
    """(class size, number of classes) for B-conjugacy classes of order-p elements."""
    G = B.parent
    T = subgroup_table(B)
    p = _characteristic(G)
    sizes = Counter(len(cls) for cls in conjugacy_classes(T) if T.element_order(cls[0]) == p)
    return sorted(sizes.items())


def cyclic_subgroups_single_class(B: SubgroupHandle) -> bool:
    """Whether all nontrivial elements of each order-p cyclic subgroup are B-conjugate."""
    T = subgroup_table(B)
    p = _characteristic(B.parent)
    class_of = {}
    for n, cls in enumerate(conjugacy_classes(T)):
        for x in cls:
            class_of[x] = n
    for x in range(1, T.order):
        if T.element_order(x) != p:
            continue
        powers = closure_indices(T, [x]) - {0}
        if len({class_of[y] for y in powers}) != 1:
            return False
    return True


def _characteristic(G: GroupTable) -> int:
    return G.algebra.ctx.p


def cyclic_subgroup_classes(B: SubgroupHandle, G: GroupTable) -> List[List[FrozenSet[int]]]:
    """G-conjugacy classes of the order-p cyclic subgroups inside the translation part of B."""
    p = _characteristic(G)
    cyclic: List[FrozenSet[int]] = []
    for x in sorted(B.indices):
        if x and G.element_order(x) == p:
            H = closure_indices(G, [x])
            if H not in cyclic:
                cyclic.append(H)
    remaining = list(cyclic)
    classes = []
    while remaining:
        start = remaining[0]
        orbit = {start}
        queue = deque([start])
        while queue:
            H = queue.popleft()
            for g in G.generators:
                K = frozenset(G.conj(g, h) for h in H)
                if K not in orbit:
                    orbit.add(K)
                    queue.append(K)
        block = [H for H in remaining if H in orbit]
        classes.append(block)
        remaining = [H for H in remaining if H not in orbit]
    return classes


def cyclic_subgroup_conjugacy(B: SubgroupHandle, G: GroupTable) -> int:
    return len(cyclic_subgroup_classes(B, G))


def check_omega_conjugation(ctx: FieldCtx) -> bool:
    """diag(w^-1, w) upper(s) diag(w, w^-1) == upper(w^2 s) for every w != 0 and s."""
    A = MatrixAlgebra(ctx, 2)
    for w in range(1, ctx.q):
        w_inv = ctx.inv_code(w)
        left, right = A.diag([w_inv, w]), A.diag([w, w_inv])
        w2 = ctx.mul_code(w, w)
        for s in range(ctx.q):
            lhs = A.mul(A.mul(left, (1, s, 0, 1)), right)
            if lhs != (1, ctx.mul_code(w2, s), 0, 1):
                logger.error(f"omega conjugation fails in GF({ctx.q}) at w={w}, s={s}")
                return False
    return True


def translation_matrix(algebra: MatrixAlgebra, v: Sequence[int]) -> Tuple[int, ...]:
    """M(v): identity with v in the last column above the diagonal."""
    m = algebra.m
    entries = [1 if r == s else 0 for r in range(m) for s in range(m)]
    for r, c in enumerate(v):
        entries[r * m + m - 1] = c
    return algebra.canonical(tuple(entries))


def translation_group(ctx: FieldCtx, m: int, cap: int = CLOSURE_CAP) -> SubgroupHandle:
    """
    Elementary abelian subgroup {M(v)} of PSL_m(q), of rank (m-1)k.

    Raises:
        CapExceeded: if q^(m-1) exceeds cap
        ObstructionError: if M(v) M(w) = M(v + w) fails for some pair
    """
    if ctx.q ** (m - 1) > cap:
        raise CapExceeded(cap, "translation group")
    algebra = MatrixAlgebra(ctx, m, projective=True)
    vectors = list(product(range(ctx.q), repeat=m - 1))
    members = {v: translation_matrix(algebra, v) for v in vectors}
    for v in vectors:
        for w in vectors:
            vw = tuple(ctx.add_code(a, b) for a, b in zip(v, w))
            if algebra.mul(members[v], members[w]) != members[vw]:
                raise ObstructionError(f"M(v)M(w) != M(v+w) for v={v}, w={w} over GF({ctx.q})")
    basis = [members[tuple(c if i == j else 0 for j in range(m - 1))]
             for i in range(m - 1) for c in _additive_basis(ctx)]
    table = group_closure(basis, cap, algebra)
    if table.order != ctx.q ** (m - 1) or not table.is_abelian():
        raise ObstructionError(f"translation group over GF({ctx.q}) is not elementary abelian of order q^{m - 1}")
    return SubgroupHandle(table, frozenset(range(table.order)))


def _additive_basis(ctx: FieldCtx) -> List[int]:
    return [ctx.encode(tuple(1 if i == t else 0 for i in range(ctx.k))) for t in range(ctx.k)]


def _block_diag(algebra: MatrixAlgebra, A: Tuple[int, ...], size: int) -> Tuple[int, ...]:
    m = algebra.m
    entries = [1 if r == s else 0 for r in range(m) for s in range(m)]
    for r in range(size):
        for s in range(size):
            entries[r * m + s] = A[r * size + s]
    return tuple(entries)


def asl_conjugation_check(ctx: FieldCtx, m: int, cap: int = CLOSURE_CAP) -> bool:
    """
    diag(A^-1, 1) M(v) diag(A, 1) == M(A^-1 v) for all A in SL_{m-1}(q) and all v.

    For k = 1 also checks that SL_{m-1}(p) permutes the hyperplanes of
    GF(p)^(m-1) transitively.
    """
    small = sl_group(ctx, m - 1, cap)
    small_algebra = small.algebra
    big = MatrixAlgebra(ctx, m)
    vectors = list(product(range(ctx.q), repeat=m - 1))
    for A in small.elements:
        A_inv = small_algebra.inverse(A)
        left = _block_diag(big, A_inv, m - 1)
        right = _block_diag(big, A, m - 1)
        for v in vectors:
            lhs = big.mul(big.mul(left, translation_matrix(big, v)), right)
            image = _apply(ctx, A_inv, v)
            if lhs != translation_matrix(big, image):
                logger.error(f"ASL conjugation fails over GF({ctx.q}) for A={A}, v={v}")
                return False
    if ctx.k == 1:
        return hyperplanes_transitive(ctx, small)
    return True


def _apply_all(ctx: FieldCtx, A: Tuple[int, ...], vectors: Sequence[Sequence[int]]) -> List[Tuple[int, ...]]:
    """Images A v of the given column vectors."""
    n = len(vectors[0])
    GF = ctx.galois_field
    rows = GF(np.array(vectors, dtype=np.int64)) @ GF(np.array(A, dtype=np.int64).reshape(n, n)).T
    return [tuple(row) for row in rows.view(np.ndarray).tolist()]


def _apply(ctx: FieldCtx, A: Tuple[int, ...], v: Sequence[int]) -> Tuple[int, ...]:
    return _apply_all(ctx, A, [v])[0]


def hyperplanes_transitive(ctx: FieldCtx, small: GroupTable) -> bool:
    dim = small.algebra.m
    GF = ctx.galois_field
    vectors = list(product(range(ctx.q), repeat=dim))
    space = GF(np.array(vectors, dtype=np.int64))
    hyperplanes = set()
    for f in vectors[1:]:
        values = (space @ GF(list(f))).view(np.ndarray).tolist()
        hyperplanes.add(frozenset(v for v, x in zip(vectors, values) if x == 0))
    start = sorted(next(iter(sorted(hyperplanes, key=sorted))))
    orbit = {frozenset(_apply_all(ctx, A, start)) for A in small.elements}
    return orbit == hyperplanes


# =============================================================================
# Mat wrapper and symplectic embedding
# =============================================================================

@dataclass(frozen=True)
class Mat:
    """Square matrix over GF(q) with entries stored as field codes, row-major."""
    ctx: FieldCtx = field(compare=False, repr=False)
    m: int = 1
    entries: Tuple[int, ...] = (1,)

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence]) -> "Mat":
        codes = []
        for row in rows:
            for x in row:
                codes.append(x.code if isinstance(x, FieldElem) else x % ctx.q)
        return cls(ctx, len(rows), tuple(codes))

    @classmethod
    def from_array(cls, ctx: FieldCtx, array: galois.FieldArray) -> "Mat":
        return cls(ctx, array.shape[0], tuple(array.view(np.ndarray).ravel().tolist()))

    def array(self) -> galois.FieldArray:
        return self.ctx.galois_field(np.array(self.entries, dtype=np.int64).reshape(self.m, self.m))

    def entry(self, i: int, j: int) -> FieldElem:
        return from_int(self.ctx, self.entries[i * self.m + j])

    def rows(self) -> List[List[int]]:
        m = self.m
        return [list(self.entries[i * m:(i + 1) * m]) for i in range(m)]

    def __matmul__(self, other: "Mat") -> "Mat":
        return Mat.from_array(self.ctx, self.array() @ other.array())

    def det(self) -> FieldElem:
        return from_int(self.ctx, int(np.linalg.det(self.array())))

    def inverse(self) -> "Mat":
        try:
            return Mat.from_array(self.ctx, np.linalg.inv(self.array()))
        except np.linalg.LinAlgError as exc:
            raise NotUnimodular("singular matrix has no inverse") from exc

    def transpose(self) -> "Mat":
        return Mat.from_array(self.ctx, self.array().T)


@dataclass(frozen=True)
class ProjMat:
    """Class of a matrix modulo the scalars c with c^m = 1."""
    rep: Mat

    @classmethod
    def of(cls, mat: Mat) -> "ProjMat":
        algebra = _projective_algebra(mat.ctx, mat.m)
        return cls(Mat(mat.ctx, mat.m, algebra.canonical(mat.entries)))


@lru_cache(maxsize=None)
def _projective_algebra(ctx: FieldCtx, m: int) -> MatrixAlgebra:
    return MatrixAlgebra(ctx, m, projective=True)


def symplectic_form(ctx: FieldCtx, m: int) -> Mat:
    """J = [[0, I], [-I, 0]]."""
    GF = ctx.galois_field
    J = GF.Zeros((2 * m, 2 * m))
    J[:m, m:] = GF.Identity(m)
    J[m:, :m] = -GF.Identity(m)
    return Mat.from_array(ctx, J)


def preserves_symplectic_form(M: Mat) -> bool:
    J = symplectic_form(M.ctx, M.m // 2)
    return (M.transpose() @ J @ M) == J


def symplectic_embed(A: Mat) -> Mat:
    """
    M(A) = diag(A, transpose(A)^-1), an element of Sp_2m(q).

    Raises:
        NotUnimodular: if det(A) != 1
    """
    ctx, m = A.ctx, A.m
    det = A.det()
    if det.code != 1:
        raise NotUnimodular(f"det(A) = {det} is not 1")
    block = ctx.galois_field.Zeros((2 * m, 2 * m))
    block[:m, :m] = A.array()
    block[m:, m:] = A.inverse().transpose().array()
    M = Mat.from_array(ctx, block)
    if not preserves_symplectic_form(M):
        raise ObstructionError("symplectic embedding does not preserve the standard form")
    return M
