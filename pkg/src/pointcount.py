"""Point-module counting: N = sum_j j * f_j over the span of the M_k (2 f2 + f1 when no
span element factors more than twice), and the Gamma oracle."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import FieldMismatch, HypothesisNotVerified, InternalAssertion, SchemaError
from .exactfield import FiniteField, Point, enumerate_projective, extension, normalize_projective, projective_count
from .gsca import GscaPresentation, in_span
from .linalg import nullspace
from .quadforms import FactorizationSet, QuadraticForm, classical_rank, factorizations, pairs, phi, product_form
from .quadsys import QuadricSystem
from .skewring import MuMatrix
from .sweep import ensure_budget, scan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PointPair:
    a: Point
    b: Point


@dataclass
class GammaSet:
    field: FiniteField
    mu: MuMatrix
    pairs: List[PointPair]
    extension_degree: int = 1

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class Stratum:
    beta: Point
    form: QuadraticForm
    factorizations: FactorizationSet

    @property
    def delta_mu(self) -> bool:
        return len(self.factorizations) == 1


@dataclass
class PointCountReport:
    strata: List[Stratum]
    unfactorable: int
    field: FiniteField
    extension_degree: int = 1
    gamma_count: Optional[int] = None
    match: Optional[bool] = None

    @property
    def fiber_counts(self) -> Dict[int, int]:
        """j -> number of span elements with exactly j factorizations."""
        counts: Dict[int, int] = {}
        for s in self.strata:
            j = len(s.factorizations)
            counts[j] = counts.get(j, 0) + 1
        return dict(sorted(counts.items()))

    @property
    def f1(self) -> int:
        return self.fiber_counts.get(1, 0)

    @property
    def f2(self) -> int:
        return self.fiber_counts.get(2, 0)

    @property
    def f_more(self) -> int:
        """Span elements with more than two factorizations."""
        return sum(c for j, c in self.fiber_counts.items() if j > 2)

    @property
    def N(self) -> int:
        return sum(j * c for j, c in self.fiber_counts.items())

    def with_gamma(self, gamma_count: int) -> "PointCountReport":
        self.gamma_count = gamma_count
        self.match = self.N == gamma_count
        return self


# ---- Gamma oracle ----

def _gamma_kernel(context: Tuple[FiniteField, int, Tuple[Tuple[Tuple[Tuple[int, ...], int], ...], ...]], a: Point) -> Iterator[PointPair]:
    F, n, relators = context
    rows = []
    for r in relators:
        row = [0] * n
        for (i, t), c in r:
            if a[i]:
                row[t] = F.add(row[t], F.mul(c, a[i]))
        rows.append(row)
    basis = nullspace(rows, n, F)
    if not basis:
        return
    if len(basis) == 1:
        yield PointPair(a, normalize_projective(F, basis[0]))
        return
    # b ranges over a whole projective subspace
    for lam in product(range(F.q), repeat=len(basis)):
        if not any(lam) or next(x for x in lam if x) != 1:
            continue
        vec = [0] * n
        for coeff, v in zip(lam, basis):
            if coeff:
                vec = [F.add(x, F.mul(coeff, y)) for x, y in zip(vec, v)]
        yield PointPair(a, normalize_projective(F, vec))


def enumerate_gamma(
    pres: GscaPresentation,
    F: Optional[FiniteField] = None,
    *,
    budget: int = 5_000_000,
    workers: int = 1,
    progress: bool = False,
) -> GammaSet:
    """All (a, b) killed by every relator, by solving for b one a at a time."""
    G = F or pres.field
    presG = pres.over(G)
    n = pres.n
    count = projective_count(G.q, n)
    ensure_budget(count if presG.relators else count * count, budget, f"Gamma over {G.name}")
    hits = scan(G, n, _gamma_kernel, (G, n, presG.relators), workers=workers, progress=progress, desc=f"Gamma {G.name}")
    for pair in hits:
        if not in_span(presG, phi(pair.a, pair.b, presG.mu)):
            raise InternalAssertion(
                f"Gamma member {pair.a} x {pair.b} fails the span test", details={"a": pair.a, "b": pair.b}
            )
    degree = G.k // pres.field.k
    return GammaSet(G, presG.mu, sorted(set(hits)), degree)


# ---- structured count ----

def _span_form(mu: MuMatrix, columns: Sequence[Sequence[int]], beta: Point) -> QuadraticForm:
    F = mu.field
    vec = [0] * len(columns[0])
    for b, col in zip(beta, columns):
        if b:
            vec = [F.add(x, F.mul(b, y)) for x, y in zip(vec, col)]
    coeffs = tuple(x if i == j else F.add(x, x) for (i, j), x in zip(pairs(mu.n), vec))
    return QuadraticForm(mu, coeffs)


def _count_kernel(context: Tuple[MuMatrix, Tuple[Tuple[int, ...], ...]], beta: Point) -> Iterator[Stratum]:
    mu, columns = context
    Q = _span_form(mu, columns, beta)
    fs = factorizations(Q)
    if fs.factorizations:
        yield Stratum(beta, Q, fs)


def count_by_factorization(
    sys: QuadricSystem,
    F: Optional[FiniteField] = None,
    *,
    verified: bool = False,
    budget: int = 5_000_000,
    workers: int = 1,
    progress: bool = False,
) -> PointCountReport:
    """f_j = number of span elements with exactly j factorizations over F."""
    if not verified:
        warnings.warn(
            HypothesisNotVerified("counting a system that was not validated as normalizing and base-point free"),
            stacklevel=2,
        )
    G = F or sys.field
    sysG = sys.over(G)
    total = projective_count(G.q, sys.n)
    ensure_budget(total, budget, f"span enumeration over {G.name}")
    columns = tuple(tuple(v) for v in sysG.vectors())
    strata = scan(G, sys.n, _count_kernel, (sysG.mu, columns), workers=workers, progress=progress, desc=f"span {G.name}")
    report = PointCountReport(strata, total - len(strata), G, G.k // sys.field.k)
    logger.info("over %s: f1=%d f2=%d N=%d", G.name, report.f1, report.f2, report.N)
    if report.f_more:
        logger.warning("over %s: %d span elements factor more than two ways", G.name, report.f_more)
    return report


def cross_validate(report: PointCountReport, gamma: GammaSet) -> Tuple[bool, Dict[str, Any]]:
    """N = |Gamma| and the factorizations of the strata are exactly the Gamma pairs."""
    if report.field != gamma.field:
        raise FieldMismatch(f"report over {report.field.name}, Gamma over {gamma.field.name}")
    F = gamma.field
    from_strata: Set[PointPair] = set()
    forms: Set[Point] = set()
    for s in report.strata:
        forms.add(s.form.normalized())
        for f in s.factorizations.factorizations:
            from_strata.add(PointPair(f.left, normalize_projective(F, f.right)))
    in_gamma = set(gamma.pairs)
    missing_from_gamma = sorted(from_strata - in_gamma)
    missing_from_strata = sorted(in_gamma - from_strata)
    outside_span = sorted(
        p for p in in_gamma if normalize_projective(F, product_form(p.a, p.b, gamma.mu)) not in forms
    )
    ok = report.N == len(gamma) and not missing_from_gamma and not missing_from_strata and not outside_span
    diagnostics = {
        "N": report.N,
        "gamma_count": len(gamma),
        "missing_from_gamma": [_pair_json(F, p) for p in missing_from_gamma],
        "missing_from_strata": [_pair_json(F, p) for p in missing_from_strata],
        "outside_span": [_pair_json(F, p) for p in outside_span],
    }
    if not ok:
        logger.warning("cross-validation failed over %s: N=%d, |Gamma|=%d", F.name, report.N, len(gamma))
    return ok, diagnostics


def _pair_json(F: FiniteField, p: PointPair) -> Dict[str, List[Any]]:
    return {"a": [F.dump(x) for x in p.a], "b": [F.dump(x) for x in p.b]}


@dataclass
class StabilizedCount:
    N: int
    degree: int
    stable: bool
    history: List[Tuple[int, int]] = field(default_factory=list)
    report: Optional[PointCountReport] = None


def stabilized_count(
    sys: QuadricSystem,
    F: Optional[FiniteField] = None,
    max_ext: int = 2,
    *,
    verified: bool = False,
    budget: int = 5_000_000,
    workers: int = 1,
    progress: bool = False,
) -> StabilizedCount:
    """Count over F_{q^m} for m = 1..max_ext.

    `degree` is where N last changed; `stable` only when the final step left N unchanged.
    """
    if max_ext < 1:
        raise SchemaError("max_ext must be >= 1")
    base = F or sys.field
    for m in range(1, max_ext + 1):
        ensure_budget(projective_count(extension(base, m).q, sys.n), budget, f"span enumeration over degree {m}")
    history: List[Tuple[int, int]] = []
    report = None
    for m in range(1, max_ext + 1):
        report = count_by_factorization(
            sys, extension(base, m), verified=verified, budget=budget, workers=workers, progress=progress
        )
        history.append((m, report.N))
    values = [N for _, N in history]
    degree = next(m for m, N in history if N == values[-1])
    stable = len(values) > 1 and values[-1] == values[-2]
    if not stable:
        logger.warning("point count %d not confirmed stable through degree %d", values[-1], max_ext)
    return StabilizedCount(values[-1], degree, stable, history, report)


# ---- commutative cross-check ----

def count_by_rank(sys: QuadricSystem, F: Optional[FiniteField] = None) -> Dict[str, int]:
    """r_j = number of span elements of classical rank j (mu = 1 only)."""
    if not sys.mu.is_identity():
        raise SchemaError("rank counting needs mu = 1 everywhere", pointer="/mu")
    G = F or sys.field
    sysG = sys.over(G)
    r1 = r2 = 0
    for beta in enumerate_projective(G, sys.n):
        r = classical_rank(sysG.combination(beta))
        r1 += r == 1
        r2 += r == 2
    return {"r1": r1, "r2": r2, "N": 2 * r2 + r1}


def mu_rank_one_count(report: PointCountReport) -> int:
    """Span elements that are squares L^2 over the report's field."""
    return sum(1 for s in report.strata if s.factorizations.mu_rank_label == 1)
