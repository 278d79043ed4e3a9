from typing import Dict, Iterable, List, Optional

from .models import CandidateReport, Certificate, ReportEnvelope

FAMILY_ORDER = ("Alt", "PSL", "PSp", "PSU", "OtherLie", "Sporadic")

FAMILY_TITLES = {
  "Alt": "Alternating groups",
  "PSL": "Linear groups",
  "PSp": "Symplectic groups",
  "PSU": "Unitary groups",
  "OtherLie": "Other groups of Lie type",
  "Sporadic": "Sporadic groups",
}

FILTER_NAMES = {
  "Thm4Rank": "Theorem 4",
  "Thm3": "Theorem 3",
  "Lemma1": "Lemma 1",
  "Prop1": "Prop 1",
  "Prop2": "Prop 2",
  "Sec31": "PSL2 translation bound",
  "Sec32": "PSL translation rank",
  "Sec33": "PSp translation bound",
  "BorelRefutation": "BorelRefutation",
  "CircleAction": "CircleAction",
  "SubgroupChain": "SubgroupChain",
  "CatalogWitness": "CatalogWitness",
}


def filter_name(filter_id: str) -> str:
  return FILTER_NAMES.get(filter_id, filter_id)


def render_json(envelope: ReportEnvelope) -> str:
  return envelope.model_dump_json(indent=2, exclude_none=True)


def chain_line(certificate: Certificate) -> str:
  """`A9 ⊃ A8 = PSL4(2) → Lemma 1` for chains, `PSL3(4) → Lemma 1` otherwise."""
  if certificate.filter != "SubgroupChain" or certificate.terminal is None:
    return f"{certificate.group} → {filter_name(certificate.filter)}"
  terminal = certificate.terminal
  text = " ⊃ ".join(certificate.chain)
  if certificate.chain and terminal.group != certificate.chain[-1]:
    text += f" = {terminal.group}"
  return f"{text} → {filter_name(terminal.filter)}"


def inequality_line(certificate: Certificate) -> Optional[str]:
  if certificate.transcript is not None:
    t = certificate.transcript
    values = ", ".join("(" + ", ".join(str(v) for v in s) + ")" for s in t.solutions) or "none"
    return f"Borel assignments for (Z_{t.p})^{t.k} at n = {t.n}: {values}; {t.reason}"
  if certificate.lhs is None or certificate.rhs is None:
    return None
  params = ", ".join(f"{k}={v}" for k, v in sorted(certificate.parameters.items()))
  line = f"{certificate.lhs} {certificate.relation} {certificate.rhs} fails"
  if params:
    line += f" ({params})"
  if certificate.note:
    line += f"; {certificate.note}"
  return line


def render_trace(certificate: Certificate) -> str:
  lines = [chain_line(certificate)]
  terminal = certificate.terminal if certificate.filter == "SubgroupChain" else certificate
  if certificate.witness:
    lines.append(f"  witness: {certificate.witness}")
  if terminal is not None:
    detail = inequality_line(terminal)
    if detail:
      lines.append(f"  {detail}")
  return "\n".join(lines)


def _by_family(entries: Iterable) -> Dict[str, List]:
  grouped: Dict[str, List] = {family: [] for family in FAMILY_ORDER}
  for entry in entries:
    grouped.setdefault(entry.family, []).append(entry)
  return grouped


def render_markdown(report: CandidateReport) -> str:
  lines = [f"# Simple groups on homology {report.n}-spheres", ""]
  lines.append(f"Families: {', '.join(report.families)}")
  lines.append(f"Config digest: `{report.config_digest}`")
  lines.append("")

  lines.append("## Candidates")
  lines.append("")
  for entry in report.candidates:
    flags = f" ({', '.join(entry.flags)})" if entry.flags else ""
    also = f" = {' = '.join(entry.aliases[1:])}" if len(entry.aliases) > 1 else ""
    lines.append(f"- {entry.group}{also}{flags}")
  if not report.candidates:
    lines.append("- none")
  lines.append("")

  excluded = _by_family(report.excluded)
  undecided = _by_family(report.undecided)
  for family in FAMILY_ORDER:
    if not excluded.get(family) and not undecided.get(family):
      continue
    lines.append(f"## {FAMILY_TITLES[family]}")
    lines.append("")
    for entry in excluded.get(family, []):
      trace = render_trace(entry.certificate).splitlines()
      lines.append(f"- excluded: {trace[0]}")
      lines.extend(f"  {line}" for line in trace[1:])
    for entry in undecided.get(family, []):
      lines.append(f"- undecided: {entry.group}: {entry.reason}")
    lines.append("")
  return "\n".join(lines).rstrip() + "\n"
