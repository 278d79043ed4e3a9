"""
Classification Service

Runs every enumerated finite simple group through the exclusion pipeline for a
fixed sphere dimension n:
1. Elementary abelian rank bounds
2. Family closed forms (translation groups, hyperplane and involution counts)
3. Metacyclic and PSL_2(p) lower bounds
4. The SL_2(q) restriction in dimension 5
5. Borel solver plus circle refutation for PSL_2(p^k), p odd, k even
6. Subgroup chains, built in and from the witness config
7. Catalog witnesses from the witness config

The first stage that fires decides the certificate. Groups are handled per
exceptional-isomorphism class; a class falls when any member falls.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

from obstruction import matgroup
from obstruction.borelsolve import circle_refutation
from obstruction.catalog import (
    FAMILIES,
    MAX_DIM,
    Family,
    GroupId,
    WitnessConfig,
    WitnessEntry,
    WitnessKind,
    aliases,
    family_iter,
    load_witness_config,
    make_group,
    normalize_id,
    parse_group,
)
from obstruction.dimbounds import (
    FILTER_IDS,
    FilterResult,
    GroupRef,
    family_checks,
    min_dim_elem_abelian,
    min_dim_metacyclic,
    prime_power,
    sl2_dim5_admissible,
)
from obstruction.errors import (
    CapExceeded,
    ConfigMissing,
    GroupNotInReport,
    NotSimple,
    ObstructionError,
    RankTooLarge,
    UnknownFilter,
    UnknownGroup,
)
from obstruction.gfield import field_create
from reporting.config import Settings, get_settings
from reporting.models import (
    BorelTranscript,
    CandidateEntry,
    CandidateReport,
    Certificate,
    ExcludedEntry,
    UndecidedEntry,
)
from reporting.translator import render_trace

logger = logging.getLogger(__name__)

STAGE = {
    "Thm4Rank": 1,
    "Sec32": 1,
    "Sec31": 2,
    "Sec33": 2,
    "Lemma1": 2,
    "Thm3": 3,
    "Prop2": 3,
    "Prop1": 4,
    "BorelRefutation": 5,
    "CircleAction": 5,
    "SubgroupChain": 6,
    "CatalogWitness": 7,
}

# Families whose closed forms cover every member that survives them
COMPLETE_FAMILIES = (Family.ALT, Family.PSL, Family.PSP)

# Involution classes are counted by brute force up to this field size
INVOLUTION_BRUTE_FORCE_Q = 4

BUILT_IN = "built-in"


class GroupStatus(str, Enum):
    """Outcome of the pipeline for one identification class"""
    CANDIDATE = "candidate"
    EXCLUDED = "excluded"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Evaluation:
    group: GroupId
    status: GroupStatus
    certificate: Optional[Certificate] = None
    reason: str = ""
    flags: Tuple[str, ...] = ()


def _never(ref: GroupRef, n: int) -> bool:
    return False


def _group_from_ref(ref: GroupRef) -> Optional[GroupId]:
    try:
        return make_group(Family(ref[0]), *ref[1:])
    except (ValueError, NotSimple):
        return None


def _ref_name(ref: GroupRef) -> str:
    if ref[0] == "SL":
        return f"SL{ref[1]}({ref[2]})"
    if ref[0] == "Metacyclic":
        return f"Z{ref[1]}:Z{ref[2]}"
    group = _group_from_ref(ref)
    return str(group) if group else str(ref)


def involution_class_count(m: int, q: int, settings: Settings) -> int:
    """
    Involution classes of the translation group's ambient PSL_3(q) in characteristic 2.

    Counted by brute force for q <= 4 when brute_force_facts is set; every
    larger case has a single class.
    """
    if m != 3 or q % 2 or not settings.brute_force_facts or q > INVOLUTION_BRUTE_FORCE_Q:
        return 1
    return _brute_force_involution_classes(m, q, settings.closure_cap)


@lru_cache(maxsize=None)
def _brute_force_involution_classes(m: int, q: int, cap: int) -> int:
    p, k = prime_power(q)
    start = time.perf_counter()
    G = matgroup.psl_group(field_create(p, k), m, cap)
    classes = matgroup.involution_class_count(G)
    logger.info(f"PSL_{m}({q}) of order {G.order} has {classes} involution class(es) "
                f"({time.perf_counter() - start:.2f}s)")
    return classes


def _checks_for(g: GroupId, n: int, settings: Settings) -> List[FilterResult]:
    involution_classes: Optional[int] = None
    if g.family is Family.PSL:
        involution_classes = involution_class_count(g.params[0], g.params[1], settings)
    return family_checks(g.ref, n, contained_excluded=_never, involution_classes=involution_classes)


def _borel_case(g: GroupId) -> Optional[Tuple[int, int]]:
    if g.family is not Family.PSL or g.params[0] != 2:
        return None
    p, k = prime_power(g.params[1])
    if p == 2 or k % 2:
        return None
    return p, k


def _transcript(t) -> BorelTranscript:
    return BorelTranscript(
        p=t.p, k=t.k, n=t.n,
        block_sizes=list(t.block_sizes),
        solutions=[list(s) for s in t.solutions],
        refuted=t.refuted,
        reason=t.reason,
        quotient_orders=list(t.quotient_orders),
    )


def _witness_bound(entry: WitnessEntry, n: int) -> Optional[Tuple[int, int, Dict[str, int]]]:
    """(lhs, rhs, parameters) of the inequality lhs <= rhs a witness entry must satisfy."""
    if entry.kind is WitnessKind.ELEMAB:
        p, k = entry.params
        return min_dim_elem_abelian(p, k), n, {"p": p, "k": k}
    if entry.kind is WitnessKind.METACYCLIC:
        p, q = entry.params
        return min_dim_metacyclic(p, q), n, {"p": p, "q": q}
    if entry.kind is WitnessKind.CONTAINS_SL2 and n == 5:
        q = entry.params[0]
        return q, 5, {"q": q}
    return None


def _witness_fails(entry: WitnessEntry, n: int) -> bool:
    bound = _witness_bound(entry, n)
    if bound is None:
        return False
    if entry.kind is WitnessKind.CONTAINS_SL2:
        return not sl2_dim5_admissible(entry.params[0])
    return bound[0] > bound[1]


class Classifier:
    """Memoized per-class evaluation at a fixed dimension."""

    def __init__(self, n: int, config: WitnessConfig, settings: Settings):
        self.n = n
        self.config = config
        self.settings = settings
        self._memo: Dict[GroupId, Evaluation] = {}
        self._active: Set[GroupId] = set()

    def evaluate(self, g: GroupId) -> Optional[Evaluation]:
        """The evaluation of g's class, or None when g is already on the evaluation stack."""
        canon = normalize_id(g)
        if canon in self._memo:
            return self._memo[canon]
        if canon in self._active:
            return None
        self._active.add(canon)
        try:
            evaluation = self._evaluate(canon)
        finally:
            self._active.discard(canon)
        self._memo[canon] = evaluation
        logger.debug(f"{canon} at n={self.n}: {evaluation.status.value}")
        return evaluation

    def _evaluate(self, canon: GroupId) -> Evaluation:
        members = aliases(canon)
        checks = {alias: _checks_for(alias, self.n, self.settings) for alias in members}
        cap_reason = ""

        for stage in range(1, 8):
            for alias in members:
                try:
                    certificate = self._stage(stage, alias, checks[alias])
                except (CapExceeded, RankTooLarge) as e:
                    logger.warning(f"{alias} at n={self.n}: {e}")
                    cap_reason = f"{alias}: {e}"
                    continue
                if certificate is not None:
                    return Evaluation(canon, GroupStatus.EXCLUDED, certificate=certificate)

        flags = []
        linear = False
        for alias in members:
            if any(e.params[0] == self.n for e in self.config.of_kind(alias, WitnessKind.OPEN)):
                flags.append("open")
            linear = linear or any(e.params[0] <= self.n for e in self.config.of_kind(alias, WitnessKind.LINEAR))
        if cap_reason:
            return Evaluation(canon, GroupStatus.UNDECIDED, reason=f"brute-force cap exceeded ({cap_reason})")
        if flags or linear or any(alias.family in COMPLETE_FAMILIES for alias in members):
            return Evaluation(canon, GroupStatus.CANDIDATE, flags=tuple(sorted(set(flags))))
        if not self.config.for_group(canon):
            reason = f"no witness for {canon} in the config"
        else:
            reason = f"no witness for {canon} excludes it at n={self.n}"
        return Evaluation(canon, GroupStatus.UNDECIDED, reason=reason + self._prop1_note(members))

    def _prop1_note(self, members: Sequence[GroupId]) -> str:
        """Point out an SL_2(q) restriction that excludes the group in dimension 5 only."""
        if self.n == 5:
            return ""
        for alias in members:
            for result in _checks_for(alias, 5, self.settings):
                if result.filter == "Prop1" and not result.passed:
                    q = result.parameters["q"]
                    return (f"; SL2({q}) < {alias} excludes it at n=5 (Prop1), "
                            f"but that restriction holds in dimension 5 only")
        return ""

    def _stage(self, stage: int, alias: GroupId, checks: Sequence[FilterResult]) -> Optional[Certificate]:
        if stage <= 4:
            for result in checks:
                if not result.passed and result.filter != "SubgroupChain" and STAGE[result.filter] == stage:
                    return self._inequality_certificate(alias, result)
            return None
        if stage == 5:
            case = _borel_case(alias)
            if case is None:
                return None
            transcript = circle_refutation(case[0], case[1], self.n)
            if not transcript.refuted:
                return None
            return Certificate(
                group=str(alias), n=self.n, filter="BorelRefutation",
                parameters={"p": case[0], "k": case[1]},
                transcript=_transcript(transcript),
                note=transcript.reason,
            )
        if stage == 6:
            targets = [(ref, BUILT_IN) for ref in _chain_refs(checks)]
            targets += [(e.params[0].ref, _provenance(e)) for e in self.config.of_kind(alias, WitnessKind.CONTAINS)]
            for ref, witness in targets:
                contained = _group_from_ref(ref)
                if contained is None:
                    continue
                evaluation = self.evaluate(contained)
                if evaluation is not None and evaluation.status is GroupStatus.EXCLUDED:
                    return self._chain_certificate(alias, contained, evaluation.certificate, witness)
            return None
        for entry in self.config.for_group(alias):
            if _witness_fails(entry, self.n):
                lhs, rhs, parameters = _witness_bound(entry, self.n)
                return Certificate(
                    group=str(alias), n=self.n, filter="CatalogWitness",
                    parameters=parameters, lhs=lhs, relation="<=", rhs=rhs,
                    witness=entry.describe(), note=entry.provenance,
                )
        return None

    def _inequality_certificate(self, alias: GroupId, result: FilterResult) -> Certificate:
        note = result.note
        if not note and result.contained:
            note = f"through {_ref_name(result.contained)}"
        return Certificate(
            group=str(alias), n=self.n, filter=result.filter,
            parameters=dict(result.parameters),
            lhs=result.lhs, relation=result.relation, rhs=result.rhs,
            note=note,
        )

    def _chain_certificate(self, alias: GroupId, contained: GroupId, inner: Certificate,
                           witness: str) -> Certificate:
        # the link names the contained group; the terminal may be another member of its class
        if inner.filter == "SubgroupChain":
            chain, terminal = [str(alias)] + inner.chain, inner.terminal
        else:
            chain, terminal = [str(alias), str(contained)], inner
        return Certificate(
            group=str(alias), n=self.n, filter="SubgroupChain",
            chain=chain, witness=witness, terminal=terminal,
        )


def _chain_refs(checks: Sequence[FilterResult]) -> List[GroupRef]:
    return [r.contained for r in checks if r.filter == "SubgroupChain" and r.contained]


def _provenance(entry: WitnessEntry) -> str:
    return f"{entry.describe()} @ {entry.provenance}" if entry.provenance else entry.describe()


def load_config(path: Optional[str] = None, settings: Optional[Settings] = None) -> WitnessConfig:
    """
    Load the witness config. An explicit path must exist; a missing default
    config yields an empty one, leaving sporadic and unitary entries undecided.

    Raises:
        ConfigMissing: if an explicit path does not exist
    """
    settings = settings or get_settings()
    if path is not None:
        return load_witness_config(path)
    try:
        return load_witness_config(settings.witness_config)
    except ConfigMissing as e:
        logger.warning(f"{e}; continuing without witness data")
        return WitnessConfig()


def _check_families(families: Sequence[str]) -> List[str]:
    unknown = [f for f in families if f not in FAMILIES and f != "PSL2"]
    if unknown:
        raise ObstructionError(f"unknown families {', '.join(unknown)}; expected {', '.join(FAMILIES)}")
    return list(families)


def classify(n: int, config: Optional[WitnessConfig] = None, families: Optional[Sequence[str]] = None,
             settings: Optional[Settings] = None) -> CandidateReport:
    """
    Classify every enumerated simple group at dimension n.

    Returns:
        CandidateReport partitioning the enumerated classes, ordered canonically

    Raises:
        ObstructionError: for n outside 3..32 or unknown families
    """
    if not 3 <= n <= MAX_DIM:
        raise ObstructionError(f"dimension {n} outside 3..{MAX_DIM}")
    settings = settings or get_settings()
    config = config if config is not None else load_config(settings=settings)
    families = _check_families(families or FAMILIES)

    logger.info("=" * 60)
    logger.info(f"Classifying simple groups on homology {n}-spheres ({', '.join(families)})")
    start = time.perf_counter()

    classes: Set[GroupId] = set()
    for family in families:
        classes.update(normalize_id(g) for g in family_iter(family, n))

    classifier = Classifier(n, config, settings)
    report = CandidateReport(n=n, families=families, config_digest=config.digest)
    for canon in sorted(classes):
        evaluation = classifier.evaluate(canon)
        names = [str(a) for a in aliases(canon)]
        family = canon.family.value
        if evaluation.status is GroupStatus.EXCLUDED:
            report.excluded.append(ExcludedEntry(group=str(canon), family=family, aliases=names,
                                                 certificate=evaluation.certificate))
        elif evaluation.status is GroupStatus.CANDIDATE:
            report.candidates.append(CandidateEntry(group=str(canon), family=family, aliases=names,
                                                    order=config.order(canon), flags=list(evaluation.flags)))
        else:
            report.undecided.append(UndecidedEntry(group=str(canon), family=family, aliases=names,
                                                   reason=evaluation.reason))

    logger.info(f"{len(report.candidates)} candidates, {len(report.excluded)} excluded, "
                f"{len(report.undecided)} undecided ({time.perf_counter() - start:.2f}s)")
    logger.info("=" * 60)
    return report


def evaluate_group(g: GroupId, n: int, config: Optional[WitnessConfig] = None,
                   settings: Optional[Settings] = None) -> Evaluation:
    settings = settings or get_settings()
    config = config if config is not None else load_config(settings=settings)
    return Classifier(n, config, settings).evaluate(g)


# =============================================================================
# Certificate replay
# =============================================================================

def verify_certificate(certificate: Certificate, config: Optional[WitnessConfig] = None,
                       settings: Optional[Settings] = None) -> bool:
    """
    Re-run the filter a certificate names with its stored parameters.

    Returns:
        True iff the exclusion reproduces exactly

    Raises:
        UnknownFilter: if the certificate names an undeclared filter
    """
    if certificate.filter not in FILTER_IDS:
        raise UnknownFilter(certificate.filter)
    settings = settings or get_settings()
    config = config if config is not None else load_config(settings=settings)
    try:
        g = parse_group(certificate.group)
    except UnknownGroup as e:
        logger.error(f"Certificate names an unknown group: {e}")
        return False

    if certificate.filter == "SubgroupChain":
        return _verify_chain(certificate, g, config, settings)
    if certificate.filter in ("BorelRefutation", "CircleAction"):
        return _verify_borel(certificate, g)
    if certificate.filter == "CatalogWitness":
        return _verify_witness(certificate, g, config)
    return _verify_inequality(certificate, g, settings)


def _verify_inequality(certificate: Certificate, g: GroupId, settings: Settings) -> bool:
    for result in _checks_for(g, certificate.n, settings):
        if (not result.passed and result.filter == certificate.filter
                and dict(result.parameters) == certificate.parameters
                and (result.lhs, result.relation, result.rhs)
                == (certificate.lhs, certificate.relation, certificate.rhs)):
            return True
    logger.info(f"{certificate.filter} for {g} at n={certificate.n} does not reproduce")
    return False


def _verify_borel(certificate: Certificate, g: GroupId) -> bool:
    case = _borel_case(g)
    if case is None or certificate.transcript is None:
        return False
    if certificate.parameters != {"p": case[0], "k": case[1]}:
        return False
    replay = circle_refutation(case[0], case[1], certificate.n)
    return replay.refuted and _transcript(replay) == certificate.transcript


def _verify_witness(certificate: Certificate, g: GroupId, config: WitnessConfig) -> bool:
    for entry in config.for_group(g):
        if entry.describe() != certificate.witness or not _witness_fails(entry, certificate.n):
            continue
        lhs, rhs, parameters = _witness_bound(entry, certificate.n)
        if (lhs, "<=", rhs, parameters) == (certificate.lhs, certificate.relation, certificate.rhs,
                                            certificate.parameters):
            return True
    return False


def _contains(a: GroupId, b: GroupId, n: int, config: WitnessConfig, settings: Settings) -> bool:
    refs = _chain_refs(_checks_for(a, n, settings))
    refs += [e.params[0].ref for e in config.of_kind(a, WitnessKind.CONTAINS)]
    target = normalize_id(b)
    for ref in refs:
        contained = _group_from_ref(ref)
        if contained is not None and normalize_id(contained) == target:
            return True
    return False


def _verify_chain(certificate: Certificate, g: GroupId, config: WitnessConfig, settings: Settings) -> bool:
    terminal = certificate.terminal
    if terminal is None or terminal.filter == "SubgroupChain" or terminal.n != certificate.n:
        return False
    if len(certificate.chain) < 2 or certificate.chain[0] != certificate.group:
        return False
    try:
        links = [parse_group(name) for name in certificate.chain]
        last = parse_group(terminal.group)
    except UnknownGroup as e:
        logger.error(f"Chain names an unknown group: {e}")
        return False
    for a, b in zip(links, links[1:]):
        if not _contains(a, b, certificate.n, config, settings):
            logger.info(f"Chain link {a} > {b} is not a recorded containment")
            return False
    if normalize_id(links[-1]) != normalize_id(last):
        return False
    return verify_certificate(terminal, config, settings)


# =============================================================================
# Explanations
# =============================================================================

def explain(report: CandidateReport, group: str) -> str:
    """
    Human-readable status of a group in a report.

    Raises:
        GroupNotInReport
    """
    name = group
    try:
        name = str(normalize_id(parse_group(group)))
    except (UnknownGroup, NotSimple):
        pass
    entry = report.find(name) or report.find(group)
    if entry is None:
        raise GroupNotInReport(f"{group} is not part of the n={report.n} report")
    if isinstance(entry, CandidateEntry):
        return f"candidate ({', '.join(entry.flags)})" if entry.flags else "candidate"
    if isinstance(entry, UndecidedEntry):
        return f"undecided: {entry.reason}"
    return render_trace(entry.certificate)
