"""
Brute-Force Fact Checks

Named verifications that back the closed-form filters with explicit group
computations:
1. Matrix identities (omega conjugation, translation additivity, ASL conjugation,
   symplectic embedding)
2. Structure counts (involution classes, Borel class structure)
3. Quaternion facts used for the SL_2 exclusions in dimension 5

Every check returns a FactResult; `holds` is False when a counterexample turns up.
"""

import logging
import time
from typing import Callable, Dict, List, Optional

from obstruction import matgroup
from obstruction.dimbounds import prime_power
from obstruction.errors import CapExceeded, ObstructionError
from obstruction.gfield import field_create
from reporting.config import Settings, get_settings
from reporting.models import FactResult

logger = logging.getLogger(__name__)

OMEGA_SWEEP_LIMIT = 27
TRANSLATION_CASES = ((3, 2), (3, 3), (3, 4), (4, 2))
SYMPLECTIC_CASES = (3, 5)
BOREL_CASES = (5, 7, 9, 13)


def _ctx(q: int):
    p, k = prime_power(q)
    return field_create(p, k)


def _prime_powers(limit: int) -> List[int]:
    found = []
    for q in range(2, limit + 1):
        try:
            prime_power(q)
        except ObstructionError:
            continue
        found.append(q)
    return found


def omega_conjugation(q: Optional[int] = None, m: int = 2, settings: Optional[Settings] = None) -> FactResult:
    cases = [q] if q else _prime_powers(OMEGA_SWEEP_LIMIT)
    failures = [x for x in cases if not matgroup.check_omega_conjugation(_ctx(x))]
    return FactResult(
        name="omega-conjugation", q=q, holds=not failures,
        summary=f"{len(cases) - len(failures)}/{len(cases)} fields pass",
        details={"fields": cases, "failures": failures},
    )


def translation_additivity(q: Optional[int] = None, m: int = 3, settings: Optional[Settings] = None) -> FactResult:
    settings = settings or get_settings()
    cases = [(m, q)] if q else list(TRANSLATION_CASES)
    failures = []
    for dim, size in cases:
        try:
            T = matgroup.translation_group(_ctx(size), dim, settings.closure_cap)
            logger.info(f"Translation group of PSL_{dim}({size}) has order {T.order}")
        except ObstructionError as e:
            if isinstance(e, CapExceeded):
                raise
            logger.error(f"Translation additivity failed for (m, q) = ({dim}, {size}): {e}")
            failures.append([dim, size])
    return FactResult(
        name="translation-additivity", q=q, holds=not failures,
        summary=f"{len(cases) - len(failures)}/{len(cases)} cases pass",
        details={"cases": [list(c) for c in cases], "failures": failures},
    )


def asl_conjugation(q: Optional[int] = None, m: int = 3, settings: Optional[Settings] = None) -> FactResult:
    settings = settings or get_settings()
    cases = [(m, q)] if q else list(TRANSLATION_CASES)
    failures = [[dim, size] for dim, size in cases
                if not matgroup.asl_conjugation_check(_ctx(size), dim, settings.closure_cap)]
    return FactResult(
        name="asl-conjugation", q=q, holds=not failures,
        summary=f"{len(cases) - len(failures)}/{len(cases)} cases pass",
        details={"cases": [list(c) for c in cases], "failures": failures},
    )


def symplectic_form(q: Optional[int] = None, m: int = 2, settings: Optional[Settings] = None) -> FactResult:
    settings = settings or get_settings()
    cases = [q] if q else list(SYMPLECTIC_CASES)
    checked = 0
    failures = []
    for size in cases:
        ctx = _ctx(size)
        G = matgroup.sl_group(ctx, m, settings.closure_cap)
        for entries in G.elements:
            checked += 1
            try:
                matgroup.symplectic_embed(matgroup.Mat(ctx, m, entries))
            except ObstructionError:
                failures.append([size, list(entries)])
    return FactResult(
        name="symplectic-form", q=q, holds=not failures,
        summary=f"{checked - len(failures)}/{checked} matrices embed into Sp_{2 * m}",
        details={"fields": cases, "failures": failures},
    )


def involution_classes(q: Optional[int] = None, m: int = 2, settings: Optional[Settings] = None) -> FactResult:
    """Conjugacy classes of involutions in PSL_m(q); q defaults to 7."""
    settings = settings or get_settings()
    q = q or 7
    G = matgroup.psl_group(_ctx(q), m, settings.closure_cap)
    count = len(matgroup.involutions(G))
    classes = matgroup.involution_class_count(G)
    noun = "class" if classes == 1 else "classes"
    return FactResult(
        name="involution-classes", q=q, holds=True,
        summary=f"{classes} {noun}, {count} involutions",
        details={"m": m, "order": G.order, "classes": classes, "involutions": count},
    )


def borel_class_structure(q: Optional[int] = None, m: int = 2, settings: Optional[Settings] = None) -> FactResult:
    """
    Order-p classes of the Borel subgroup of PSL_2(q): two classes of size
    (q-1)/2 for odd q, one class of size q-1 for even q.
    """
    settings = settings or get_settings()
    cases = [q] if q else list(BOREL_CASES)
    rows: Dict[str, object] = {}
    failures = []
    for size in cases:
        ctx = _ctx(size)
        B = matgroup.borel_subgroup(ctx, settings.closure_cap)
        structure = matgroup.order_p_class_structure(B)
        expected = [((size - 1) // 2, 2)] if size % 2 else [(size - 1, 1)]
        cyclic = matgroup.cyclic_subgroup_conjugacy(B, B.parent)
        rows[str(size)] = {"classes": [list(s) for s in structure], "cyclic_subgroup_classes": cyclic}
        if structure != expected:
            failures.append(size)
    return FactResult(
        name="borel-class-structure", q=q, holds=not failures,
        summary=", ".join(f"q={s}: {rows[str(s)]['classes']}" for s in cases),
        details={"cases": rows, "failures": failures},
    )


def q8_search(q: Optional[int] = None, m: int = 2, settings: Optional[Settings] = None) -> FactResult:
    """A quaternion subgroup inside SL_2(q); q defaults to 5."""
    settings = settings or get_settings()
    cases = [q] if q else [5, 9]
    found = {}
    for size in cases:
        G = matgroup.sl_group(_ctx(size), 2, settings.closure_cap)
        H = matgroup.find_quaternion_subgroup(G, settings.subgroup_search_cap)
        found[str(size)] = H is not None
    return FactResult(
        name="q8-search", q=q, holds=all(found.values()),
        summary=", ".join(f"SL2({s}): {'Q8 found' if v else 'no Q8'}" for s, v in found.items()),
        details={"found": found},
    )


def q8_o3xo2(q: Optional[int] = None, m: int = 2, settings: Optional[Settings] = None) -> FactResult:
    """Q8 has no faithful image in O(3) x O(2), and Z_5 x| Z_4 is neither cyclic nor dihedral."""
    embeds = matgroup.embeds_in_O3xO2(matgroup.quaternion_group())
    frobenius = matgroup.is_cyclic_or_dihedral(matgroup.metacyclic_group(5, 4))
    return FactResult(
        name="q8-o3xo2", q=q, holds=not embeds and not frobenius,
        summary=f"Q8 embeds in O(3)xO(2): {embeds}; Z5:Z4 cyclic or dihedral: {frobenius}",
        details={"q8_embeds": embeds, "z5_z4_cyclic_or_dihedral": frobenius},
    )


FACTS: Dict[str, Callable[..., FactResult]] = {
    "omega-conjugation": omega_conjugation,
    "translation-additivity": translation_additivity,
    "asl-conjugation": asl_conjugation,
    "symplectic-form": symplectic_form,
    "involution-classes": involution_classes,
    "borel-class-structure": borel_class_structure,
    "q8-search": q8_search,
    "q8-o3xo2": q8_o3xo2,
}


def run_fact(name: str, q: Optional[int] = None, m: Optional[int] = None,
             settings: Optional[Settings] = None) -> List[FactResult]:
    """
    Run one named fact, or every fact with its default cases for `all`.

    Raises:
        ObstructionError: for unknown fact names
        CapExceeded: when a brute-force enumeration exceeds the configured caps
    """
    settings = settings or get_settings()
    names = list(FACTS) if name == "all" else [name]
    results = []
    for fact in names:
        check = FACTS.get(fact)
        if check is None:
            raise ObstructionError(f"unknown fact {fact!r}; expected one of {', '.join(FACTS)} or all")
        start = time.perf_counter()
        kwargs = {"settings": settings}
        if name != "all":
            kwargs["q"] = q
            if m is not None:
                kwargs["m"] = m
        result = check(**kwargs)
        logger.info(f"Fact {fact}: {result.summary} ({time.perf_counter() - start:.2f}s)")
        results.append(result)
    return results
