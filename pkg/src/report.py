from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from . import __version__
from .exactfield import FiniteField
from .gsca import GscaPresentation
from .pointcount import GammaSet, PointCountReport, StabilizedCount, Stratum, mu_rank_one_count
from .quadforms import FactorizationSet, QuadraticForm
from .quadsys import SystemVerdict
from .skewring import MuMatrix, SkewPoly

Report = Dict[str, Any]


def header(command: str, field: FiniteField, n: int, description: Optional[str]) -> Report:
    return {"command": command, "version": __version__, "field": field.name, "n": n, "description": description}


def point(F: FiniteField, p: Sequence[int]) -> List[Any]:
    return [F.dump(x) for x in p]


def factorization_rows(fs: FactorizationSet, mu: MuMatrix) -> List[Dict[str, Any]]:
    F = mu.field
    return [
        {
            "left": SkewPoly.linear(mu, f.left).render(),
            "right": SkewPoly.linear(mu, f.right).render(),
            "left_coeffs": point(F, f.left),
            "right_coeffs": point(F, f.right),
        }
        for f in fs.factorizations
    ]


def check_result(verdict: SystemVerdict) -> Report:
    return {
        "ok": verdict.ok,
        "independent": verdict.independent,
        "normalizing": verdict.normalizing,
        "base_point_free": verdict.base_point_free,
        "certificates": verdict.certificates,
    }


def present_result(pres: GscaPresentation, checks: Dict[str, bool]) -> Report:
    F = pres.field
    return {
        "relations": pres.relation_texts(),
        "y": pres.y_texts(),
        "alpha": [point(F, a) for a in pres.alpha],
        "gamma": [point(F, g) for g in pres.gamma],
        "verified": all(checks.values()),
        "audit": checks,
    }


def stratum_row(s: Stratum) -> Dict[str, Any]:
    F = s.form.field
    return {
        "beta": point(F, s.beta),
        "form": s.form.render(),
        "factorizations": [f.render(s.form.mu) for f in s.factorizations.factorizations],
        "delta_mu": s.delta_mu,
        "mu_rank": s.factorizations.mu_rank_label,
    }


def count_result(
    report: PointCountReport,
    stabilized: Optional[StabilizedCount],
    diagnostics: Dict[str, Any],
    hypotheses: Optional[SystemVerdict],
    rank_count: Optional[Dict[str, int]] = None,
) -> Report:
    out: Report = {
        "f1": report.f1,
        "f2": report.f2,
        "f_more": report.f_more,
        "fiber_counts": {str(j): c for j, c in report.fiber_counts.items()},
        "N": report.N,
        "gamma_count": report.gamma_count,
        "match": report.match,
        "extension_degree": report.extension_degree,
        "strata": [stratum_row(s) for s in report.strata],
        "working_field": report.field.name,
        "unfactorable": report.unfactorable,
        "mu_rank_one": mu_rank_one_count(report),
    }
    if stabilized is not None:
        out["stable"] = stabilized.stable
        out["stabilized_at"] = stabilized.degree
        out["history"] = [{"extension_degree": m, "N": N} for m, N in stabilized.history]
    out["cross_validation"] = diagnostics
    if hypotheses is not None:
        out["hypotheses"] = check_result(hypotheses)
    if rank_count is not None:
        out["rank_count"] = rank_count
    return out


def factor_result(Q: QuadraticForm, fs: FactorizationSet, mu_rank: Any, max_ext: int) -> Report:
    return {
        "form": Q.render(),
        "working_field": Q.field.name,
        "count": len(fs),
        "factorizations": factorization_rows(fs, Q.mu),
        "mu_rank": mu_rank,
        "mu_rank_max_ext": max_ext,
    }


def hilbert_result(dims: List[int], expected: List[int]) -> Report:
    return {"dims": dims, "polynomial_ring_dims": expected, "matches_polynomial_ring": dims == expected}


def oracle_result(gamma: GammaSet) -> Report:
    F = gamma.field
    return {
        "working_field": F.name,
        "extension_degree": gamma.extension_degree,
        "gamma_count": len(gamma),
        "pairs": [{"a": point(F, p.a), "b": point(F, p.b)} for p in gamma.pairs],
    }


def error_report(command: Optional[str], err: Any) -> Report:
    return {"command": command, "version": __version__, "error": err.as_dict()}


# ---- rendering ----

def to_json(report: Report) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def _cell(x: Any) -> str:
    if isinstance(x, (list, tuple)):
        return "; ".join(_cell(v) for v in x) if x and not all(isinstance(v, int) for v in x) else str(list(x))
    return "" if x is None else str(x)


def _render(key: str, value: Any, indent: str, lines: List[str]) -> None:
    if isinstance(value, dict):
        lines.append(f"{indent}{key}:")
        for k, v in value.items():
            _render(k, v, indent + "  ", lines)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        lines.append(f"{indent}{key}:")
        frame = pd.DataFrame([{k: _cell(v) for k, v in row.items()} for row in value])
        lines.extend(indent + "  " + line for line in frame.to_string(index=False).splitlines())
    elif isinstance(value, list) and value and all(isinstance(v, str) for v in value):
        lines.append(f"{indent}{key}:")
        lines.extend(f"{indent}  {v}" for v in value)
    else:
        lines.append(f"{indent}{key}: {_cell(value)}")


def to_text(report: Report) -> str:
    lines: List[str] = []
    for key, value in report.items():
        _render(key, value, "", lines)
    return "\n".join(lines) + "\n"
