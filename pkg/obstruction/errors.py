"""
Engine Exceptions

Every failure raised by the obstruction engine derives from ObstructionError,
so callers can catch the whole family at the service boundary.
"""

from typing import Optional


class ObstructionError(Exception):
    """Base class for all engine failures"""


# Finite fields

class NonPrime(ObstructionError):
    """Field characteristic is not prime"""
    def __init__(self, p: int):
        super().__init__(f"{p} is not prime")
        self.p = p


class DegreeOutOfRange(ObstructionError):
    """Extension degree outside 1..8"""
    def __init__(self, k: int):
        super().__init__(f"extension degree {k} outside 1..8")
        self.k = k


class OverflowBound(ObstructionError):
    """Field order exceeds 2^31"""
    def __init__(self, p: int, k: int):
        super().__init__(f"{p}^{k} exceeds 2^31")
        self.p = p
        self.k = k


class DivisionByZero(ObstructionError):
    """Inverse of the zero element requested"""


class ZeroElement(ObstructionError):
    """Multiplicative order of zero requested"""


# Groups

class CapExceeded(ObstructionError):
    """Group too large for brute-force enumeration"""
    def __init__(self, cap: int, what: str = "group closure"):
        super().__init__(f"{what} exceeded cap of {cap} elements")
        self.cap = cap
        self.what = what


class NotUnimodular(ObstructionError):
    """Matrix determinant is not 1"""


class RankTooLarge(ObstructionError):
    """Subgroup lattice requested for rank above 4"""
    def __init__(self, k: int):
        super().__init__(f"rank {k} above lattice limit 4")
        self.k = k


class NotFaithful(ObstructionError):
    """Character matrix has a nontrivial common kernel"""


# Bounds

class PrimeTooSmall(ObstructionError):
    """Theorem 3 bound needs a prime p >= 5"""
    def __init__(self, p: int):
        super().__init__(f"prime {p} is below 5")
        self.p = p


class NoEffectiveAction(ObstructionError):
    """Z_q cannot act effectively on Z_p (q does not divide p - 1)"""
    def __init__(self, p: int, q: int):
        super().__init__(f"{q} does not divide {p} - 1")
        self.p = p
        self.q = q


# Catalogue and configuration

class NotSimple(ObstructionError):
    """Group parameters do not describe a nonabelian simple group"""


class ParseError(ObstructionError):
    """Malformed witness configuration line"""
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownGroup(ObstructionError):
    """Group name not recognised by the catalogue"""
    def __init__(self, name: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown group {name!r}{where}")
        self.name = name
        self.line = line


class InvalidWitness(ObstructionError):
    """Witness parameters outside their valid range"""
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ConfigMissing(ObstructionError):
    """Witness configuration file not found"""


# Classification

class UnknownFilter(ObstructionError):
    """Certificate names a filter the engine does not know"""


class GroupNotInReport(ObstructionError):
    """Group requested for explanation is absent from the report"""
