"""
Finite Simple Group Catalog

Group identifiers by family, the exceptional-isomorphism identification table,
order formulas, bounded family enumeration and the witness configuration file.

Config lines read `GROUP ":" WITNESS [@ provenance]` with `#` comments, where
WITNESS is one of:

    elemab(p,k)        contains (Z_p)^k
    metacyclic(p,q)    contains Z_p x| Z_q
    contains GROUP     contains the named simple group
    contains SL(2,q)   contains SL_2(q)
    order N            group order (metadata)
    linear d           acts linearly on the d-sphere
    open n             existence of an action in dimension n is open
"""

import hashlib
import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from math import factorial, gcd
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import isprime, nextprime, primerange

from .dimbounds import min_dim_elem_abelian, prime_power
from .errors import ConfigMissing, InvalidWitness, NonPrime, NotSimple, ParseError, UnknownGroup

logger = logging.getLogger(__name__)

MAX_DIM = 32


class Family(str, Enum):
    ALT = "Alt"
    PSL = "PSL"
    PSP = "PSp"
    PSU = "PSU"
    OTHER_LIE = "OtherLie"
    SPORADIC = "Sporadic"


_FAMILY_RANK = {family: i for i, family in enumerate(Family)}

SPORADIC_NAMES = (
    "M11", "M12", "M22", "M23", "M24",
    "J1", "J2", "J3", "J4",
    "Co1", "Co2", "Co3",
    "Fi22", "Fi23", "Fi24'",
    "HS", "McL", "He", "Ru", "Suz", "ON", "HN", "Ly", "Th", "B", "M",
)

OTHER_LIE_SERIES = ("Sz", "Ree", "2F4", "G2", "3D4", "F4", "E6", "2E6", "E7", "E8")


@dataclass(frozen=True)
class GroupId:
    family: Family
    params: Tuple = ()

    @property
    def ref(self) -> Tuple:
        return (self.family.value,) + tuple(self.params)

    def sort_key(self) -> Tuple:
        return (_FAMILY_RANK[self.family],) + tuple(str(x).zfill(8) if isinstance(x, int) else x for x in self.params)

    def __lt__(self, other: "GroupId") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        f, p = self.family, self.params
        if f is Family.ALT:
            return f"A{p[0]}"
        if f in (Family.PSL, Family.PSP, Family.PSU):
            return f"{f.value}{p[0]}({p[1]})"
        if f is Family.OTHER_LIE:
            series, q = p
            if series == "2F4" and q == 2:
                return "2F4(2)'"
            return f"{series}({q})"
        return p[0]


def alt(m: int) -> GroupId:
    return make_group(Family.ALT, m)


def psl(m: int, q: int) -> GroupId:
    return make_group(Family.PSL, m, q)


def psp(dim: int, q: int) -> GroupId:
    return make_group(Family.PSP, dim, q)


def psu(m: int, q: int) -> GroupId:
    return make_group(Family.PSU, m, q)


def other_lie(series: str, q: int) -> GroupId:
    return make_group(Family.OTHER_LIE, series, q)


def sporadic(name: str) -> GroupId:
    return make_group(Family.SPORADIC, name)


def _prime_power_or_none(q: int) -> Optional[Tuple[int, int]]:
    try:
        return prime_power(q) if q > 1 else None
    except NonPrime:
        return None


def _odd_power(q: int, p: int) -> bool:
    pk = _prime_power_or_none(q)
    return pk is not None and pk[0] == p and pk[1] % 2 == 1


def make_group(family: Family, *params) -> GroupId:
    """
    Build a GroupId, rejecting parameters that do not give a simple group.

    Raises:
        NotSimple
    """
    g = GroupId(family, tuple(params))
    if not is_simple(g):
        raise NotSimple(f"{family.value}{params} is not a simple group")
    return g


def is_simple(g: GroupId) -> bool:
    f, p = g.family, g.params
    if f is Family.ALT:
        return p[0] >= 5
    if f is Family.SPORADIC:
        return p[0] in SPORADIC_NAMES
    if f is Family.OTHER_LIE:
        series, q = p
        if _prime_power_or_none(q) is None:
            return False
        if series == "Sz":
            return _odd_power(q, 2) and q >= 8
        if series == "Ree":
            return _odd_power(q, 3) and q >= 27
        if series == "2F4":
            return _odd_power(q, 2)
        if series == "G2":
            return q >= 3
        if series in OTHER_LIE_SERIES:
            return True
        match = re.match(r"^O(\d+)([+-]?)$", series)
        if not match:
            return False
        dim, sign = int(match.group(1)), match.group(2)
        # O_(2l+1)(2^k) is PSp_2l(2^k) and is enumerated there
        if dim % 2 and q % 2 == 0:
            return False
        return dim >= 7 and (dim % 2 == 1) == (sign == "")
    m, q = p
    if _prime_power_or_none(q) is None:
        return False
    if f is Family.PSL:
        return m >= 3 or (m == 2 and q >= 4)
    if f is Family.PSP:
        return m % 2 == 0 and m >= 4 and (m, q) != (4, 2)
    if f is Family.PSU:
        return m >= 3 and (m, q) != (3, 2)
    return False


# =============================================================================
# Identification table
# =============================================================================

_IDENTIFICATIONS: List[Tuple[GroupId, List[GroupId]]] = [
    (GroupId(Family.ALT, (5,)), [GroupId(Family.PSL, (2, 4)), GroupId(Family.PSL, (2, 5))]),
    (GroupId(Family.ALT, (6,)), [GroupId(Family.PSL, (2, 9))]),
    (GroupId(Family.PSL, (2, 7)), [GroupId(Family.PSL, (3, 2))]),
    (GroupId(Family.PSL, (4, 2)), [GroupId(Family.ALT, (8,))]),
    (GroupId(Family.PSU, (4, 2)), [GroupId(Family.PSP, (4, 3))]),
]

_CANONICAL: Dict[GroupId, GroupId] = {}
for _canon, _others in _IDENTIFICATIONS:
    _CANONICAL[_canon] = _canon
    for _other in _others:
        _CANONICAL[_other] = _canon


def normalize_id(g: GroupId) -> GroupId:
    """Canonical representative of g's exceptional-isomorphism class."""
    if not is_simple(g):
        raise NotSimple(f"{g} is not a simple group")
    return _CANONICAL.get(g, g)


def aliases(g: GroupId) -> List[GroupId]:
    """Every member of g's identification class, canonical representative first."""
    canon = normalize_id(g)
    members = [canon] + sorted(x for x, c in _CANONICAL.items() if c == canon and x != canon)
    return members


# =============================================================================
# Orders
# =============================================================================

def group_order(g: GroupId) -> Optional[int]:
    f, p = g.family, g.params
    if f is Family.ALT:
        return factorial(p[0]) // 2
    if f is Family.PSL:
        m, q = p
        order = q ** (m * (m - 1) // 2)
        for i in range(2, m + 1):
            order *= q ** i - 1
        return order // gcd(m, q - 1)
    if f is Family.PSP:
        dim, q = p
        m = dim // 2
        order = q ** (m * m)
        for i in range(1, m + 1):
            order *= q ** (2 * i) - 1
        return order // gcd(2, q - 1)
    if f is Family.PSU:
        m, q = p
        order = q ** (m * (m - 1) // 2)
        for i in range(2, m + 1):
            order *= q ** i - (-1) ** i
        return order // gcd(m, q + 1)
    return None


# =============================================================================
# Parsing group names
# =============================================================================

_PATTERNS = [
    (re.compile(r"^(?:Alt|A)\(?(\d+)\)?$"), lambda m: alt(int(m[1]))),
    (re.compile(r"^PSL\((\d+),\s*(\d+)\)$"), lambda m: psl(int(m[1]), int(m[2]))),
    (re.compile(r"^(?:PSL|L)(\d+)\((\d+)\)$"), lambda m: psl(int(m[1]), int(m[2]))),
    (re.compile(r"^PSp\((\d+),\s*(\d+)\)$"), lambda m: psp(int(m[1]), int(m[2]))),
    (re.compile(r"^(?:PSp|S)(\d+)\((\d+)\)$"), lambda m: psp(int(m[1]), int(m[2]))),
    (re.compile(r"^PSU\((\d+),\s*(\d+)\)$"), lambda m: psu(int(m[1]), int(m[2]))),
    (re.compile(r"^(?:PSU|U)(\d+)\((\d+)\)$"), lambda m: psu(int(m[1]), int(m[2]))),
    (re.compile(r"^2F4\(2\)'$"), lambda m: other_lie("2F4", 2)),
    (re.compile(r"^2G2\((\d+)\)$"), lambda m: other_lie("Ree", int(m[1]))),
    (re.compile(r"^(Sz|Ree|2F4|G2|3D4|F4|E6|2E6|E7|E8|O\d+[+-]?)\((\d+)\)$"),
     lambda m: other_lie(m[1], int(m[2]))),
]


def parse_group(text: str, line: Optional[int] = None) -> GroupId:
    """
    Parse a group name such as `A7`, `PSL(2,25)`, `PSL2(25)`, `PSp4(3)`,
    `PSU(3,3)`, `G2(4)`, `2F4(2)'`, `O8-(2)` or a sporadic name.

    Raises:
        UnknownGroup: for unrecognised names or non-simple parameters
    """
    name = text.strip()
    if name in SPORADIC_NAMES:
        return sporadic(name)
    for pattern, build in _PATTERNS:
        match = pattern.match(name)
        if match:
            try:
                return build(match)
            except NotSimple as exc:
                raise UnknownGroup(name, line) from exc
    raise UnknownGroup(name, line)


# =============================================================================
# Family enumeration
# =============================================================================

def _prime_box(n: int) -> List[int]:
    """Primes p with (p-1)/2 <= n, and one prime beyond."""
    bound = 2 * n + 1
    primes = list(primerange(2, bound + 1))
    primes.append(nextprime(bound))
    return primes


def _k_range(p: int, factor: int, n: int) -> range:
    """k up to the largest value with (Z_p)^(factor*k) admissible in dimension n, plus one."""
    k = 1
    while min_dim_elem_abelian(p, factor * (k + 1)) <= n:
        k += 1
    return range(1, k + 2)


def _try(family: Family, *params) -> Optional[GroupId]:
    g = GroupId(family, tuple(params))
    return g if is_simple(g) else None


def family_iter(family: str, n: int) -> Iterator[GroupId]:
    """
    Members of a family inside the termination box for dimension n plus one
    margin step in every parameter; classify performs the actual exclusions.
    """
    if not 0 <= n <= MAX_DIM:
        raise ValueError(f"dimension {n} outside 0..{MAX_DIM}")
    family = family if isinstance(family, str) else family.value
    primes = _prime_box(n)
    found: List[GroupId] = []

    if family == "Alt":
        m = 5
        while m // 2 - 1 <= n:
            found.append(alt(m))
            m += 1
        found.append(alt(m))
    elif family in ("PSL2", "PSL"):
        for p in primes:
            for k in _k_range(p, 1, n):
                g = _try(Family.PSL, 2, p ** k)
                if g:
                    found.append(g)
        if family == "PSL":
            m = 3
            while min_dim_elem_abelian(2, m - 2) <= n:
                for p in primes:
                    for k in _k_range(p, m - 1, n):
                        found.append(psl(m, p ** k))
                m += 1
    elif family == "PSp":
        m = 2
        while min_dim_elem_abelian(2, max(m - 2, 1)) <= n:
            for p in primes:
                for k in _k_range(p, max(m - 1, 1), n):
                    g = _try(Family.PSP, 2 * m, p ** k)
                    if g:
                        found.append(g)
            m += 1
    elif family == "PSU":
        m = 3
        while min_dim_elem_abelian(2, max(1, (m - 1) // 2) ** 2) <= n:
            for p in primes:
                for k in _k_range(p, max(1, m // 2) ** 2, n):
                    g = _try(Family.PSU, m, p ** k)
                    if g:
                        found.append(g)
            m += 1
    elif family == "OtherLie":
        for series in OTHER_LIE_SERIES:
            for p in primes:
                for k in _k_range(p, 1, n):
                    g = _try(Family.OTHER_LIE, series, p ** k)
                    if g:
                        found.append(g)
        # the Levi rank dim/2 - 2 of the smallest orthogonal type bounds dim
        for dim in range(7, 2 * n + 8):
            for sign in (("",) if dim % 2 else ("+", "-")):
                for p in primes:
                    for k in _k_range(p, 1, n):
                        g = _try(Family.OTHER_LIE, f"O{dim}{sign}", p ** k)
                        if g:
                            found.append(g)
    elif family == "Sporadic":
        found = [sporadic(name) for name in SPORADIC_NAMES]
    else:
        raise ValueError(f"unknown family {family!r}")

    seen = set()
    for g in found:
        if g not in seen:
            seen.add(g)
            yield g


FAMILIES = ("Alt", "PSL", "PSp", "PSU", "OtherLie", "Sporadic")


# =============================================================================
# Witness configuration
# =============================================================================

class WitnessKind(str, Enum):
    ELEMAB = "elemab"
    METACYCLIC = "metacyclic"
    CONTAINS = "contains"
    CONTAINS_SL2 = "contains_sl2"
    ORDER = "order"
    LINEAR = "linear"
    OPEN = "open"


@dataclass(frozen=True)
class WitnessEntry:
    group: GroupId
    kind: WitnessKind
    params: Tuple = ()
    provenance: str = ""
    line: int = 0

    def key(self) -> Tuple:
        return (self.group, self.kind, self.params)

    def describe(self) -> str:
        if self.kind is WitnessKind.CONTAINS:
            return f"contains {self.params[0]}"
        if self.kind is WitnessKind.CONTAINS_SL2:
            return f"contains SL2({self.params[0]})"
        if self.kind in (WitnessKind.ELEMAB, WitnessKind.METACYCLIC):
            return f"{self.kind.value}({', '.join(str(x) for x in self.params)})"
        return f"{self.kind.value} {self.params[0]}"


@dataclass
class WitnessConfig:
    entries: List[WitnessEntry] = field(default_factory=list)
    digest: str = "none"
    path: Optional[str] = None

    def for_group(self, g: GroupId) -> List[WitnessEntry]:
        return [e for e in self.entries if e.group == g]

    def of_kind(self, g: GroupId, kind: WitnessKind) -> List[WitnessEntry]:
        return [e for e in self.entries if e.group == g and e.kind is kind]

    def order(self, g: GroupId) -> Optional[int]:
        entries = self.of_kind(g, WitnessKind.ORDER)
        return entries[0].params[0] if entries else group_order(g)


_LINE = re.compile(r"^(?P<group>[^:]+):(?P<witness>[^@]+)(?:@(?P<prov>.*))?$")
_PAIR = re.compile(r"^(elemab|metacyclic)\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_SL2 = re.compile(r"^SL(?:\(2,\s*|2\()(\d+)\)$")
_SCALAR = re.compile(r"^(order|linear|open)\s+(\d+)$")


def _parse_witness(text: str, group: GroupId, provenance: str, line: int) -> WitnessEntry:
    text = text.strip()
    match = _PAIR.match(text)
    if match:
        kind, a, b = match.group(1), int(match.group(2)), int(match.group(3))
        if not isprime(a):
            raise InvalidWitness(f"{kind} prime {a} is not prime", line)
        if kind == "elemab" and b < 1:
            raise InvalidWitness(f"elemab rank {b} must be positive", line)
        if kind == "metacyclic" and (a < 5 or b < 2 or (a - 1) % b):
            raise InvalidWitness(f"metacyclic({a},{b}) has no effective action", line)
        return WitnessEntry(group, WitnessKind(kind), (a, b), provenance, line)
    if text.startswith("contains "):
        target = text[len("contains "):].strip()
        sl2 = _SL2.match(target)
        if sl2:
            return WitnessEntry(group, WitnessKind.CONTAINS_SL2, (int(sl2.group(1)),), provenance, line)
        contained = parse_group(target, line)
        if contained == group:
            raise InvalidWitness(f"{group} cannot contain itself", line)
        return WitnessEntry(group, WitnessKind.CONTAINS, (contained,), provenance, line)
    match = _SCALAR.match(text)
    if match:
        return WitnessEntry(group, WitnessKind(match.group(1)), (int(match.group(2)),), provenance, line)
    raise ParseError(line, f"unrecognised witness {text!r}")


def parse_witness_config(text: str) -> List[WitnessEntry]:
    entries: Dict[Tuple, WitnessEntry] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        match = _LINE.match(body)
        if not match:
            raise ParseError(number, f"expected 'GROUP: WITNESS', got {body!r}")
        group = parse_group(match.group("group"), number)
        entry = _parse_witness(match.group("witness"), group, (match.group("prov") or "").strip(), number)
        entries.setdefault(entry.key(), entry)
    return list(entries.values())


def load_witness_config(path) -> WitnessConfig:
    """
    Read and validate a witness config file.

    Raises:
        ConfigMissing, ParseError, UnknownGroup, InvalidWitness
    """
    source = Path(path)
    if not source.is_file():
        raise ConfigMissing(f"witness config {source} not found")
    text = source.read_text(encoding="utf-8")
    entries = parse_witness_config(text)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    logger.info(f"Loaded {len(entries)} witness entries from {source}")
    return WitnessConfig(entries=entries, digest=digest, path=str(source))
