"""
Command Line Interface

Batch entrypoint for the classification engine:
1. classify - candidate report for one dimension (JSON or markdown)
2. bounds   - closed-form values for a single group
3. borel    - every fixed-point assignment the Borel solver admits
4. facts    - named brute-force verifications
5. verify   - replay certificates from a certificate or report file
6. explain  - exclusion trace for one group

Exit codes: 0 success, 1 usage or input error, 2 brute-force cap exceeded,
3 certificate verification failure.
"""

import json
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

import click
import typer
from pydantic import ValidationError

from obstruction import __version__
from obstruction.borelsolve import SolverOptions, borel_solve, build_lattice, parse_partition
from obstruction.catalog import FAMILIES, aliases, parse_group
from obstruction.dimbounds import bounds_for
from obstruction.errors import CapExceeded, ObstructionError
from reporting.config import OutputFormat, get_settings
from reporting.models import CandidateReport, Certificate, ReportEnvelope
from reporting.translator import render_json, render_markdown
from services import classify as classify_groups
from services import evaluate_group, explain as explain_group, load_config, run_fact, verify_certificate

logger = logging.getLogger(__name__)

PROG_NAME = "obstruction"
EXIT_USAGE = 1
EXIT_CAP = 2
EXIT_VERIFY = 3

app = typer.Typer(add_completion=False, help="Finite simple groups acting on homology spheres.")


def _configure_logging() -> None:
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def _emit(text: str, output: Optional[Path]) -> None:
    if output is not None:
        output.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        typer.echo(text)


def _timing(start: float, enabled: bool) -> Optional[dict]:
    if not (enabled or get_settings().emit_timing):
        return None
    return {"seconds": round(time.perf_counter() - start, 3)}


def _families(text: Optional[str]) -> List[str]:
    if not text:
        return list(FAMILIES)
    return [part.strip() for part in text.split(",") if part.strip()]


@app.command()
def classify(
    n: int = typer.Option(..., "-n", "--dim", help="Sphere dimension, 3..32."),
    families: Optional[str] = typer.Option(None, "--families", help="Comma separated families, e.g. Alt,PSL."),
    config: Optional[Path] = typer.Option(None, "--config", help="Witness config path."),
    fmt: Optional[OutputFormat] = typer.Option(None, "--format", help="json or md."),
    output: Optional[Path] = typer.Option(None, "--output", help="Write to a file instead of stdout."),
    timing: bool = typer.Option(False, "--timing", help="Attach timing metadata."),
) -> None:
    """Classify the simple groups that may act on a homology n-sphere."""
    start = time.perf_counter()
    settings = get_settings()
    witness = load_config(str(config) if config else None, settings)
    report = classify_groups(n, witness, _families(families), settings)
    fmt = fmt or settings.output_format
    if fmt is OutputFormat.MD:
        _emit(render_markdown(report), output)
        return
    envelope = ReportEnvelope(
        command="classify",
        parameters={"n": n, "families": report.families, "config": witness.path},
        report=report,
        timing=_timing(start, timing),
    )
    _emit(render_json(envelope), output)


@app.command()
def bounds(
    group: str = typer.Option(..., "--group", help="Group name, e.g. PSL(2,25) or A7."),
    n: Optional[int] = typer.Option(None, "-n", "--dim", help="Instantiate the checks at this dimension."),
    output: Optional[Path] = typer.Option(None, "--output"),
) -> None:
    """Print the closed-form bounds relevant to one group."""
    g = parse_group(group)
    payload = {"aliases": [str(a) for a in aliases(g)]}
    for alias in aliases(g):
        payload[str(alias)] = bounds_for(alias.ref, n)
    if n is not None:
        evaluation = evaluate_group(g, n)
        payload["status"] = evaluation.status.value
        if evaluation.certificate is not None:
            payload["certificate"] = evaluation.certificate.model_dump(exclude_none=True)
        if evaluation.reason:
            payload["reason"] = evaluation.reason
    envelope = ReportEnvelope(command="bounds", parameters={"group": group, "n": n}, payload=payload)
    _emit(render_json(envelope), output)


@app.command()
def borel(
    p: int = typer.Option(..., "--p", help="Prime."),
    k: int = typer.Option(..., "--k", help="Rank of (Z_p)^k, at most 4."),
    n: int = typer.Option(..., "-n", "--dim", help="Sphere dimension."),
    classes: str = typer.Option("trivial", "--classes", help="trivial, single, rank, auto:psl2(q) or a,b|c,d."),
    strict_gap: bool = typer.Option(False, "--strict-gap", help="Require r(K) - r(A) >= 2 on covers (odd p)."),
    output: Optional[Path] = typer.Option(None, "--output"),
    timing: bool = typer.Option(False, "--timing"),
) -> None:
    """Enumerate every fixed-point assignment for (Z_p)^k on a homology n-sphere."""
    start = time.perf_counter()
    L = build_lattice(p, k)
    partition = parse_partition(classes, L)
    solutions = borel_solve(L, n, partition, SolverOptions(strict_gap=strict_gap), get_settings().solution_limit)
    payload = {
        "lattice": {"p": p, "k": k, "subgroups": len(L.subgroups), "full": L.full},
        "partition": {"label": partition.label, "blocks": [list(b) for b in partition.blocks]},
        "count": len(solutions),
        "assignments": [list(s.values) for s in solutions],
        "block_values": [[s.r(b[0]) for b in partition.blocks] for s in solutions],
    }
    envelope = ReportEnvelope(
        command="borel",
        parameters={"p": p, "k": k, "n": n, "classes": classes, "strict_gap": strict_gap},
        payload=payload,
        timing=_timing(start, timing),
    )
    _emit(render_json(envelope), output)


@app.command()
def facts(
    check: str = typer.Option(..., "--check", help="Fact name or all."),
    q: Optional[int] = typer.Option(None, "--q", help="Field size."),
    m: Optional[int] = typer.Option(None, "--m", help="Matrix size where the fact takes one."),
) -> None:
    """Run a named brute-force verification."""
    results = run_fact(check, q, m)
    for result in results:
        status = "ok" if result.holds else "FAILED"
        typer.echo(f"{result.name}: {result.summary} [{status}]")
    if not all(result.holds for result in results):
        raise typer.Exit(code=EXIT_VERIFY)


def _certificates(data: dict) -> List[Certificate]:
    if "report" in data and data.get("report") is not None:
        report = CandidateReport.model_validate(data["report"])
        return [entry.certificate for entry in report.excluded]
    return [Certificate.model_validate(data)]


@app.command()
def verify(
    certificate: Path = typer.Option(..., "--certificate", help="Certificate JSON or a classify report."),
    config: Optional[Path] = typer.Option(None, "--config", help="Witness config path."),
) -> None:
    """Replay certificates; exits 3 when any does not reproduce."""
    try:
        data = json.loads(certificate.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ObstructionError(f"cannot read certificate file {certificate}: {e}") from e
    try:
        certificates = _certificates(data)
    except ValidationError as e:
        typer.echo(f"invalid certificate: {e}", err=True)
        raise typer.Exit(code=EXIT_VERIFY)

    settings = get_settings()
    witness = load_config(str(config) if config else None, settings)
    failures = [c.group for c in certificates if not verify_certificate(c, witness, settings)]
    payload = {"certificates": len(certificates), "verified": not failures, "failures": failures}
    typer.echo(json.dumps(payload, indent=2))
    if failures:
        raise typer.Exit(code=EXIT_VERIFY)


@app.command()
def explain(
    group: str = typer.Option(..., "--group", help="Group name."),
    report: Optional[Path] = typer.Option(None, "--report", help="classify JSON output."),
    n: Optional[int] = typer.Option(None, "-n", "--dim", help="Classify at this dimension instead of reading a report."),
) -> None:
    """Render the exclusion trace of one group."""
    if report is not None:
        data = json.loads(report.read_text(encoding="utf-8"))
        candidate_report = CandidateReport.model_validate(data.get("report", data))
    elif n is not None:
        candidate_report = classify_groups(n)
    else:
        raise click.UsageError("explain needs --report or -n")
    typer.echo(explain_group(candidate_report, group))


@app.command()
def version() -> None:
    typer.echo(__version__)


def run(argv: Optional[List[str]] = None) -> int:
    """Invoke the CLI and map failures onto exit codes."""
    _configure_logging()
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = app(args=args, standalone_mode=False, prog_name=PROG_NAME)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except CapExceeded as e:
        logger.error(f"Cap exceeded: {e}")
        typer.echo(f"error: {e}", err=True)
        return EXIT_CAP
    except ObstructionError as e:
        logger.error(f"{type(e).__name__}: {e}")
        typer.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
