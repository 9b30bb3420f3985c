import argparse
import logging
import sys
import warnings
from math import comb
from typing import Any, Dict, List, Optional, Tuple

from src import report as rpt
from src.document import InputDocument, load_input
from src.errors import AlgebraError, CheckFailed, DependentMatrices, InternalAssertion, SchemaError
from src.exactfield import FiniteField, extension
from src.expr import parse_form_expression
from src.gsca import audit_presentation, build_presentation, hilbert_dimensions
from src.pointcount import (
    count_by_factorization,
    count_by_rank,
    cross_validate,
    enumerate_gamma,
    stabilized_count,
)
from src.quadforms import factorizations, mu_rank
from src.quadsys import validate_system
from src.settings import Settings, load_settings

logger = logging.getLogger("src.main")

COMMANDS = ("check", "present", "count", "factor", "hilbert", "oracle")


def ext_cap(settings: Settings, F: FiniteField) -> int:
    """Highest extension degree over F that stays within max_field_degree."""
    return max(1, min(settings.max_ext, settings.max_field_degree // F.k))


def _validate(doc: InputDocument, settings: Settings, progress: bool):
    return validate_system(
        doc.system,
        policy=settings.order_policy,
        max_ext=ext_cap(settings, doc.field),
        budget=settings.budget,
        workers=settings.workers,
        progress=progress,
        limit=settings.max_reported_base_points,
    )


def run(
    command: str,
    doc: InputDocument,
    settings: Settings,
    *,
    form: Optional[str] = None,
    ext_degree: Optional[int] = None,
    dmax: Optional[int] = None,
    progress: bool = False,
) -> Tuple[Dict[str, Any], int]:
    """Execute one command; returns the report and the exit code."""
    if command not in COMMANDS:
        raise SchemaError(f"unknown command {command!r}")
    if ext_degree is not None and ext_degree * doc.field.k > settings.max_field_degree:
        raise SchemaError(
            f"extension degree {ext_degree} over {doc.field.name} is above max_field_degree {settings.max_field_degree}"
        )
    out = rpt.header(command, doc.field, doc.n, doc.description)
    if doc.assumptions:
        out["assumptions"] = list(doc.assumptions)
    system = doc.system
    G = extension(doc.field, ext_degree or 1)
    scan_opts = dict(budget=settings.budget, workers=settings.workers, progress=progress)

    if command == "check":
        verdict = _validate(doc, settings, progress)
        out["result"] = rpt.check_result(verdict)
        if not verdict.independent:
            out["error"] = DependentMatrices(
                "M_1..M_n are linearly dependent", details=verdict.certificates["independence"]
            ).as_dict()
        return out, 0 if verdict.ok else 2

    if command == "present":
        pres = build_presentation(system)
        checks = audit_presentation(pres, system)
        out["result"] = rpt.present_result(pres, checks)
        return out, 0 if all(checks.values()) else 2

    if command == "hilbert":
        pres = build_presentation(system)
        top = settings.hilbert_max_degree if dmax is None else dmax
        dims = hilbert_dimensions(pres, top, budget=settings.budget, max_degree=settings.hilbert_max_degree)
        expected = [comb(doc.n + d - 1, d) for d in range(top + 1)]
        out["result"] = rpt.hilbert_result(dims, expected)
        return out, 0

    if command == "oracle":
        pres = build_presentation(system)
        gamma = enumerate_gamma(pres, G, **scan_opts)
        out["result"] = rpt.oracle_result(gamma)
        return out, 0

    if command == "factor":
        if not form:
            raise SchemaError("factor needs --form EXPR")
        Q = parse_form_expression(form, doc.mu)
        QG = Q.over(G) if G != doc.field else Q
        fs = factorizations(QG)
        top = ext_cap(settings, QG.field)
        label = mu_rank(QG, max_ext=top)
        out["result"] = rpt.factor_result(QG, fs, label, top)
        return out, 0

    # count
    verdict = _validate(doc, settings, progress)
    pres = build_presentation(system)
    stabilized = None
    if ext_degree is not None:
        report = count_by_factorization(system, G, verified=verdict.ok, **scan_opts)
    else:
        stabilized = stabilized_count(system, max_ext=ext_cap(settings, doc.field), verified=verdict.ok, **scan_opts)
        report = stabilized.report
    gamma = enumerate_gamma(pres, report.field, **scan_opts)
    report.with_gamma(len(gamma))
    ok, diagnostics = cross_validate(report, gamma)
    rank_count = count_by_rank(system, report.field) if doc.mu.is_identity() else None
    out["result"] = rpt.count_result(report, stabilized, diagnostics, verdict, rank_count)
    if not ok:
        err = CheckFailed("N does not match the Gamma oracle", details=diagnostics)
        out["error"] = err.as_dict()
        return out, err.exit_code
    return out, 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gsca", description="Graded skew Clifford algebras: checks, presentations and point counts")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", required=True, help="JSON document (field, n, mu, matrices or forms)")
    ap.add_argument("--ext-degree", type=int, help="work over F_{q^M}")
    ap.add_argument("--max-ext", type=int, help="highest extension degree for searches and stabilization")
    ap.add_argument("--order-policy", choices=("given", "search"))
    ap.add_argument("--format", choices=("text", "json"), default="json")
    ap.add_argument("--budget", type=int, help="maximum enumeration size")
    ap.add_argument("--form", help="form expression for `factor`")
    ap.add_argument("--dmax", type=int, help="top degree for `hilbert`")
    ap.add_argument("--workers", type=int, help="processes for enumeration (0 = one per CPU)")
    ap.add_argument("--config", help="settings file (default config/defaults.json)")
    ap.add_argument("--verbose", action="store_true")
    ap.add_argument("--progress", action="store_true", help="progress bars on stderr")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    logging.captureWarnings(True)
    warnings.simplefilter("default")

    try:
        doc = load_input(args.input)
        opts = doc.options
        settings = (
            load_settings(args.config)
            .merged(max_ext=opts.max_ext, order_policy=opts.order_policy, budget=opts.budget, hilbert_max_degree=opts.hilbert_max_degree)
            .merged(max_ext=args.max_ext, order_policy=args.order_policy, budget=args.budget, workers=args.workers)
        )
        out, code = run(
            args.command, doc, settings, form=args.form, ext_degree=args.ext_degree, dmax=args.dmax, progress=args.progress
        )
    except AlgebraError as e:
        logger.error("%s: %s", e.code, e.message)
        out, code = rpt.error_report(args.command, e), e.exit_code
    except OSError as e:
        err = SchemaError(f"cannot read input: {e}", pointer="")
        out, code = rpt.error_report(args.command, err), err.exit_code
    except Exception as e:
        logger.exception("unexpected failure")
        err = InternalAssertion(f"{type(e).__name__}: {e}")
        out, code = rpt.error_report(args.command, err), err.exit_code

    sys.stdout.write(rpt.to_json(out) if args.format == "json" else rpt.to_text(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
