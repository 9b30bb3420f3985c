from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import FieldMismatch, InternalAssertion, SchemaError
from .exactfield import FiniteField, Point, extension, projective_count
from .linalg import nullspace, rank, transpose
from .quadforms import MuSymMatrix, QuadraticForm, pairs, tau, tau_inv
from .skewring import MuMatrix, check_normalizing_sequence
from .sweep import ensure_budget, scan

logger = logging.getLogger(__name__)

FREE = "free-up-to-degree-m"
FOUND = "base-point-found"


@dataclass(frozen=True)
class QuadricSystem:
    """n mu-symmetric matrices M_1..M_n; the quadric system is the span of q_k = tau(M_k)."""

    mu: MuMatrix
    matrices: Tuple[MuSymMatrix, ...]

    def __post_init__(self) -> None:
        if len(self.matrices) != self.mu.n:
            raise SchemaError(f"need exactly {self.mu.n} matrices, got {len(self.matrices)}", pointer="/matrices")
        for k, M in enumerate(self.matrices):
            if M.mu != self.mu:
                raise FieldMismatch(f"matrix {k + 1} is over a different mu or field")

    @classmethod
    def from_forms(cls, mu: MuMatrix, forms: Sequence[QuadraticForm]) -> "QuadricSystem":
        return cls(mu, tuple(tau_inv(q) for q in forms))

    @property
    def n(self) -> int:
        return self.mu.n

    @property
    def field(self) -> FiniteField:
        return self.mu.field

    @property
    def forms(self) -> Tuple[QuadraticForm, ...]:
        return tuple(tau(M) for M in self.matrices)

    def vectors(self) -> List[Tuple[int, ...]]:
        """Coordinates M_ij, i <= j, one vector per matrix."""
        return [M.vector() for M in self.matrices]

    def over(self, big: FiniteField) -> "QuadricSystem":
        if big == self.field:
            return self
        return QuadricSystem(self.mu.over(big), tuple(M.over(big) for M in self.matrices))

    def combination(self, beta: Sequence[int]) -> MuSymMatrix:
        """sum_k beta_k M_k."""
        F = self.field
        vec = [0] * len(pairs(self.n))
        for b, M in zip(beta, self.matrices):
            if b:
                vec = [F.add(x, F.mul(b, y)) for x, y in zip(vec, M.vector())]
        return MuSymMatrix.from_vector(self.mu, vec)


def check_independence(sys: QuadricSystem) -> bool:
    return rank(sys.vectors(), sys.field) == sys.n


def dependency_relation(sys: QuadricSystem) -> Optional[List[int]]:
    """Some beta != 0 with sum beta_k M_k = 0, or None."""
    basis = nullspace(transpose(sys.vectors()), sys.n, sys.field)
    return basis[0] if basis else None


def vu_contains(a: Sequence[int], b: Sequence[int], mu: MuMatrix) -> bool:
    F, n = mu.field, mu.n
    return all(
        F.mul(a[j], b[i]) == F.mul(mu(i, j), F.mul(a[i], b[j])) for i in range(n) for j in range(i + 1, n)
    )


def lift_value(form: QuadraticForm, a: Sequence[int], b: Sequence[int], reverse: bool = False) -> int:
    """Evaluate a lift of the form at (a, b): z_i z_j -> a_i b_j, or mu_ji a_j b_i when `reverse`."""
    F, mu = form.field, form.mu
    acc = 0
    for (i, j), c in zip(pairs(mu.n), form.coeffs):
        if not c:
            continue
        term = F.mul(mu(j, i), F.mul(a[j], b[i])) if reverse and i != j else F.mul(a[i], b[j])
        acc = F.add(acc, F.mul(c, term))
    return acc


def vu_partner(a: Sequence[int], mu: MuMatrix) -> Optional[Point]:
    """The only b (up to scale) that can satisfy the V(U) equations with a."""
    F, n = mu.field, mu.n
    lead = next(k for k, x in enumerate(a) if x)
    b = [0] * n
    b[lead] = 1
    for j in range(lead + 1, n):
        b[j] = F.mul(mu(j, lead), a[j])
    b = tuple(b)
    return b if vu_contains(a, b, mu) else None


def _base_point_kernel(context: Tuple[MuMatrix, Tuple[QuadraticForm, ...]], a: Point) -> Iterator[Tuple[Point, Point]]:
    mu, forms = context
    b = vu_partner(a, mu)
    if b is not None and all(lift_value(q, a, b) == 0 for q in forms):
        yield a, b


@dataclass(frozen=True)
class BasePoint:
    a: Point
    b: Point
    extension_degree: int
    field: FiniteField

    def as_json(self) -> Dict[str, Any]:
        return {
            "a": [self.field.dump(x) for x in self.a],
            "b": [self.field.dump(x) for x in self.b],
            "extension_degree": self.extension_degree,
        }


@dataclass
class BasePointReport:
    searched_extensions: List[int]
    base_points: List[BasePoint]
    verdict: str
    field: str = ""
    truncated: bool = False

    @property
    def free(self) -> bool:
        return self.verdict == FREE


def find_base_points(
    sys: QuadricSystem,
    F: Optional[FiniteField] = None,
    max_ext: int = 2,
    *,
    budget: int = 5_000_000,
    workers: int = 1,
    progress: bool = False,
    limit: int = 16,
) -> BasePointReport:
    """Search V(U) over F_{q^m}, m = 1..max_ext, for common zeros of the lifted forms."""
    base = F or sys.field
    report = BasePointReport([], [], FREE, field=base.name)
    for m in range(1, max_ext + 1):
        G = extension(base, m)
        ensure_budget(projective_count(G.q, sys.n), budget, f"base-point search over {G.name}")
        sysG = sys.over(G)
        hits = scan(G, sys.n, _base_point_kernel, (sysG.mu, sysG.forms), workers=workers, progress=progress, desc=f"base points {G.name}")
        report.searched_extensions.append(m)
        for a, b in hits:
            if not vu_contains(a, b, sysG.mu) or any(lift_value(q, a, b) for q in sysG.forms):
                raise InternalAssertion(f"reported base point {a} x {b} does not vanish", details={"a": a, "b": b})
        if hits:
            report.verdict = FOUND
            report.truncated = len(hits) > limit
            report.base_points = [BasePoint(a, b, m, G) for a, b in hits[:limit]]
            logger.info("%d base points over %s", len(hits), G.name)
            break
    return report


@dataclass
class SystemVerdict:
    independent: bool
    normalizing: Optional[bool] = None
    base_point_free: Optional[bool] = None
    certificates: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.independent and self.normalizing and self.base_point_free)


def validate_system(
    sys: QuadricSystem,
    F: Optional[FiniteField] = None,
    policy: str = "given",
    *,
    max_ext: int = 2,
    budget: int = 5_000_000,
    workers: int = 1,
    progress: bool = False,
    limit: int = 16,
) -> SystemVerdict:
    """Independence, then the normalizing property, then base-point freeness; stops at the first failure."""
    if F is not None and F != sys.field:
        sys = sys.over(F)
    base = sys.field
    if not check_independence(sys):
        relation = dependency_relation(sys)
        return SystemVerdict(
            independent=False,
            certificates={
                "independence": {
                    "rank": rank(sys.vectors(), base),
                    "relation": [base.dump(x) for x in relation or []],
                }
            },
        )
    verdict = SystemVerdict(independent=True)
    verdict.certificates["independence"] = {"rank": sys.n}

    norm = check_normalizing_sequence([q.poly() for q in sys.forms], policy)
    verdict.normalizing = norm.normalizing
    verdict.certificates["normalizing"] = {
        "policy": norm.policy,
        "order": [k + 1 for k in norm.order] if norm.order is not None else None,
        "reason": norm.reason,
    }
    if not norm.normalizing:
        return verdict

    bp = find_base_points(sys, base, max_ext, budget=budget, workers=workers, progress=progress, limit=limit)
    verdict.base_point_free = bp.free
    verdict.certificates["base_points"] = {
        "verdict": bp.verdict,
        "searched_extensions": bp.searched_extensions,
        "base_points": [p.as_json() for p in bp.base_points],
        "truncated": bp.truncated,
    }
    return verdict
