"""
Finite Field Arithmetic

Exact arithmetic in GF(p^k) in the polynomial basis over Z_p, carried by a
galois field class. Elements are identified by their integer codes
sum(c_i * p^i), which is the galois integer representation; for the matrix
group hot loops the add/mul tables are materialised from the field class.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, List, Sequence, Tuple, Type

import galois
import numpy as np
from sympy import isprime

from .errors import DegreeOutOfRange, DivisionByZero, NonPrime, OverflowBound, ZeroElement

logger = logging.getLogger(__name__)

MAX_DEGREE = 8
MAX_ORDER = 2 ** 31

# Above this order the add/mul tables are not materialised
TABLE_LIMIT = 1024


@dataclass(frozen=True)
class FieldCtx:
    """Arithmetic context for GF(p^k); modulus is monic, lowest coefficient first."""
    p: int
    k: int
    modulus: Tuple[int, ...]
    q: int

    @cached_property
    def galois_field(self) -> Type[galois.FieldArray]:
        if self.k == 1:
            return galois.GF(self.p)
        poly = galois.Poly(list(reversed(self.modulus)), field=galois.GF(self.p))
        return galois.GF(self.q, irreducible_poly=poly)

    def scalar(self, code: int) -> galois.FieldArray:
        return self.galois_field(code)

    def encode(self, coeffs: Sequence[int]) -> int:
        if self.k == 1:
            return coeffs[0] % self.p
        padded = [c % self.p for c in coeffs] + [0] * (self.k - len(coeffs))
        return int(self.galois_field.Vector(list(reversed(padded))))

    def decode(self, code: int) -> Tuple[int, ...]:
        if self.k == 1:
            return (code % self.p,)
        return tuple(int(c) for c in reversed(self.scalar(code).vector().view(np.ndarray).tolist()))

    @cached_property
    def _add_table(self) -> List[List[int]]:
        x = self.galois_field.elements
        return (x[:, np.newaxis] + x[np.newaxis, :]).view(np.ndarray).tolist()

    @cached_property
    def _mul_table(self) -> List[List[int]]:
        x = self.galois_field.elements
        return (x[:, np.newaxis] * x[np.newaxis, :]).view(np.ndarray).tolist()

    @cached_property
    def _inv_table(self) -> List[int]:
        units = self.galois_field.units
        table = [0] * self.q
        for a, b in zip(units.view(np.ndarray).tolist(), (units ** -1).view(np.ndarray).tolist()):
            table[a] = b
        return table

    @property
    def tabulated(self) -> bool:
        return self.q <= TABLE_LIMIT

    # Integer-code arithmetic used by the matrix group hot loops

    def add_code(self, a: int, b: int) -> int:
        if self.tabulated:
            return self._add_table[a][b]
        return int(self.scalar(a) + self.scalar(b))

    def neg_code(self, a: int) -> int:
        return int(-self.scalar(a))

    def sub_code(self, a: int, b: int) -> int:
        return int(self.scalar(a) - self.scalar(b))

    def mul_code(self, a: int, b: int) -> int:
        if self.tabulated:
            return self._mul_table[a][b]
        return int(self.scalar(a) * self.scalar(b))

    def pow_code(self, a: int, e: int) -> int:
        if a == 0 and e < 0:
            raise DivisionByZero("negative power of zero")
        return int(self.scalar(a) ** e)

    def inv_code(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.tabulated:
            return self._inv_table[a]
        return int(self.scalar(a) ** -1)


@dataclass(frozen=True)
class FieldElem:
    """Element of GF(p^k), identified by its integer code."""
    ctx: FieldCtx = field(compare=False, repr=False)
    code: int = 0

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self.ctx.decode(self.code)

    def is_zero(self) -> bool:
        return self.code == 0

    def __add__(self, other: "FieldElem") -> "FieldElem":
        return add(self.ctx, self, other)

    def __sub__(self, other: "FieldElem") -> "FieldElem":
        return add(self.ctx, self, neg(self.ctx, other))

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return mul(self.ctx, self, other)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return mul(self.ctx, self, inv(self.ctx, other))

    def __neg__(self) -> "FieldElem":
        return neg(self.ctx, self)

    def __pow__(self, e: int) -> "FieldElem":
        return power(self.ctx, self, e)

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) or "0"


@lru_cache(maxsize=None)
def field_create(p: int, k: int = 1) -> FieldCtx:
    """
    Create the arithmetic context for GF(p^k).

    The modulus is the lexicographically smallest monic irreducible polynomial
    of degree k, ordered by its coefficients from x^(k-1) down to x^0. The
    galois field class itself is built on first arithmetic use.

    Raises:
        NonPrime, DegreeOutOfRange, OverflowBound
    """
    if not isprime(p):
        raise NonPrime(p)
    if not 1 <= k <= MAX_DEGREE:
        raise DegreeOutOfRange(k)
    if p ** k > MAX_ORDER:
        raise OverflowBound(p, k)

    if k == 1:
        modulus: Tuple[int, ...] = (0, 1)
    else:
        poly = galois.irreducible_poly(p, k, method="min")
        modulus = tuple(int(c) for c in reversed(poly.coeffs))
    logger.debug(f"GF({p}^{k}) modulus coefficients {modulus}")
    return FieldCtx(p=p, k=k, modulus=modulus, q=p ** k)


def from_int(ctx: FieldCtx, code: int) -> FieldElem:
    return FieldElem(ctx, code % ctx.q)


def to_int(a: FieldElem) -> int:
    return a.code


def zero(ctx: FieldCtx) -> FieldElem:
    return FieldElem(ctx, 0)


def one(ctx: FieldCtx) -> FieldElem:
    return FieldElem(ctx, 1)


def prime_field_elem(ctx: FieldCtx, c: int) -> FieldElem:
    return FieldElem(ctx, c % ctx.p)


def elements(ctx: FieldCtx) -> Iterator[FieldElem]:
    for code in range(ctx.q):
        yield FieldElem(ctx, code)


def add(ctx: FieldCtx, a: FieldElem, b: FieldElem) -> FieldElem:
    return FieldElem(ctx, ctx.add_code(a.code, b.code))


def neg(ctx: FieldCtx, a: FieldElem) -> FieldElem:
    return FieldElem(ctx, ctx.neg_code(a.code))


def mul(ctx: FieldCtx, a: FieldElem, b: FieldElem) -> FieldElem:
    return FieldElem(ctx, ctx.mul_code(a.code, b.code))


def inv(ctx: FieldCtx, a: FieldElem) -> FieldElem:
    if a.is_zero():
        raise DivisionByZero("inverse of zero")
    return FieldElem(ctx, ctx.inv_code(a.code))


def power(ctx: FieldCtx, a: FieldElem, e: int) -> FieldElem:
    return FieldElem(ctx, ctx.pow_code(a.code, e))


def is_square(ctx: FieldCtx, a: FieldElem) -> bool:
    """Every element is a square in characteristic 2; zero counts as a square."""
    if ctx.p == 2 or a.is_zero():
        return True
    return bool(ctx.scalar(a.code).is_square())


def square_set(ctx: FieldCtx) -> List[FieldElem]:
    units = ctx.galois_field.units
    codes = units[units.is_square()].view(np.ndarray).tolist()
    return [FieldElem(ctx, c) for c in sorted(codes)]


def element_order(ctx: FieldCtx, a: FieldElem) -> int:
    """Multiplicative order of a nonzero element; always divides q - 1."""
    if a.is_zero():
        raise ZeroElement("zero has no multiplicative order")
    return int(ctx.scalar(a.code).multiplicative_order())


@lru_cache(maxsize=None)
def _generator_code(ctx: FieldCtx) -> int:
    for code in range(1, ctx.q):
        if element_order(ctx, FieldElem(ctx, code)) == ctx.q - 1:
            return code
    raise AssertionError(f"GF({ctx.q}) has no multiplicative generator")


def generator(ctx: FieldCtx) -> FieldElem:
    """First element of order q - 1 in integer-code order."""
    return FieldElem(ctx, _generator_code(ctx))
