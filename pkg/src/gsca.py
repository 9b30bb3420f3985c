from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import BudgetExceeded, DependentMatrices
from .exactfield import FiniteField
from .linalg import SparseEchelon, left_nullspace, rank, solve
from .quadforms import MuSymMatrix, pairs, tau, tau_inv
from .quadsys import QuadricSystem, check_independence, dependency_relation
from .skewring import MuMatrix, render_scalar
from .sweep import ensure_budget

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]
WordPoly = Dict[Word, int]


@dataclass(frozen=True)
class GscaPresentation:
    """Relations sum_{i<=j} alpha_ij Y_ij = 0 with Y_ij = x_i x_j + mu_ij x_j x_i (Y_ii = 2 x_i^2).

    `columns` holds the coordinate vectors (i <= j) of M_1..M_n, `gamma[k]`
    expresses y_k as sum_{i<=j} gamma_ij Y_ij.
    """

    n: int
    mu: MuMatrix
    alpha: Tuple[Tuple[int, ...], ...]
    gamma: Tuple[Tuple[int, ...], ...]
    relators: Tuple[Tuple[Tuple[Word, int], ...], ...]
    columns: Tuple[Tuple[int, ...], ...]

    @property
    def field(self) -> FiniteField:
        return self.mu.field

    def relator(self, m: int) -> WordPoly:
        return dict(self.relators[m])

    def over(self, big: FiniteField) -> "GscaPresentation":
        if big == self.field:
            return self
        emb = self.field.embedding_into(big)

        def lift(rows: Sequence[Sequence[int]]) -> Tuple[Tuple[int, ...], ...]:
            return tuple(tuple(emb[x] for x in row) for row in rows)

        relators = tuple(tuple((w, emb[c]) for w, c in r) for r in self.relators)
        return GscaPresentation(
            self.n, self.mu.over(big), lift(self.alpha), lift(self.gamma), relators, lift(self.columns)
        )

    def relation_texts(self) -> List[str]:
        return [render_words(self.field, self.relator(m)) + " = 0" for m in range(len(self.relators))]

    def y_texts(self) -> List[str]:
        return [
            f"y{k + 1} = " + render_words(self.field, combine_y(self.mu, g)) for k, g in enumerate(self.gamma)
        ]


def y_word_poly(mu: MuMatrix, i: int, j: int) -> WordPoly:
    """Y_ij as a free-algebra element."""
    F = mu.field
    if i == j:
        return {(i, i): F.from_int(2)}
    return {(i, j): 1, (j, i): mu(i, j)}


def combine_y(mu: MuMatrix, coeffs: Sequence[int]) -> WordPoly:
    """sum_{i<=j} coeffs_ij Y_ij."""
    F = mu.field
    out: WordPoly = {}
    for (i, j), c in zip(pairs(mu.n), coeffs):
        if not c:
            continue
        for w, x in y_word_poly(mu, i, j).items():
            v = F.add(out.get(w, 0), F.mul(c, x))
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return out


def render_words(F: FiniteField, poly: WordPoly, letter: str = "x") -> str:
    if not poly:
        return "0"
    parts = []
    for w in sorted(poly):
        c = poly[w]
        if len(w) == 2 and w[0] == w[1]:
            word = f"{letter}{w[0] + 1}^2"
        else:
            word = "*".join(f"{letter}{i + 1}" for i in w)
        parts.append(word if c == 1 else f"{render_scalar(F, c)}*{word}")
    return " + ".join(parts)


def build_presentation(sys: QuadricSystem) -> GscaPresentation:
    F, n = sys.field, sys.n
    if not check_independence(sys):
        relation = dependency_relation(sys) or []
        raise DependentMatrices(
            "M_1..M_n are linearly dependent",
            details={"relation": [F.dump(x) for x in relation]},
        )
    columns = [tuple(v) for v in sys.vectors()]
    alpha = [tuple(row) for row in left_nullspace(columns, F)]
    gamma = []
    for k in range(n):
        target = [1 if l == k else 0 for l in range(n)]
        g = solve(columns, target, F)
        if g is None:
            raise DependentMatrices(f"no dual vector for M_{k + 1}")
        gamma.append(tuple(g))
    relators = tuple(tuple(sorted(combine_y(sys.mu, a).items())) for a in alpha)
    logger.debug("presentation: %d relations in %d generators over %s", len(alpha), n, F.name)
    return GscaPresentation(n, sys.mu, tuple(alpha), tuple(gamma), relators, tuple(columns))


def relator_value(pres: GscaPresentation, m: int, a: Sequence[int], b: Sequence[int]) -> int:
    """Evaluate relator m at (a, b) with x_i x_j -> a_i b_j."""
    F = pres.field
    acc = 0
    for (i, j), c in pres.relators[m]:
        acc = F.add(acc, F.mul(c, F.mul(a[i], b[j])))
    return acc


def span_coordinates(pres: GscaPresentation, vec: Sequence[int]) -> List[int]:
    """beta_k = gamma_k . vec; equals the coordinates of vec when vec lies in span{M_k}."""
    F = pres.field
    out = []
    for g in pres.gamma:
        acc = 0
        for x, y in zip(g, vec):
            if x and y:
                acc = F.add(acc, F.mul(x, y))
        out.append(acc)
    return out


def recombine(pres: GscaPresentation, beta: Sequence[int]) -> Tuple[int, ...]:
    F = pres.field
    vec = [0] * len(pres.columns[0])
    for b, col in zip(beta, pres.columns):
        if b:
            vec = [F.add(x, F.mul(b, y)) for x, y in zip(vec, col)]
    return tuple(vec)


def in_span(pres: GscaPresentation, M: MuSymMatrix) -> bool:
    vec = M.vector()
    return recombine(pres, span_coordinates(pres, vec)) == tuple(vec)


def hilbert_dimensions(
    pres: GscaPresentation, dmax: int, *, budget: Optional[int] = None, max_degree: Optional[int] = None
) -> List[int]:
    """dim A_d for d = 0..dmax by row reduction of the ideal inside the words of length d."""
    if dmax < 0:
        raise BudgetExceeded("dmax must be >= 0", details={"dmax": dmax})
    if max_degree is not None and dmax > max_degree:
        raise BudgetExceeded(
            f"hilbert degree {dmax} is above the configured bound {max_degree}",
            details={"dmax": dmax, "max_degree": max_degree},
        )
    n, F = pres.n, pres.field
    if budget is not None:
        ensure_budget(n ** dmax, budget, "hilbert word space")
    relators = [pres.relator(m) for m in range(len(pres.relators))]
    dims = []
    for d in range(dmax + 1):
        if d < 2 or not relators:
            dims.append(n ** d)
            continue
        echelon = SparseEchelon(F)
        for s in range(d - 1):
            for u in product(range(n), repeat=s):
                for v in product(range(n), repeat=d - 2 - s):
                    for r in relators:
                        echelon.add({_word_index(u + w + v, n): c for w, c in r.items()})
        dims.append(n ** d - echelon.rank)
        logger.debug("dim A_%d = %d", d, dims[-1])
    return dims


def _word_index(word: Word, n: int) -> int:
    idx = 0
    for i in word:
        idx = idx * n + i
    return idx


def audit_presentation(pres: GscaPresentation, sys: QuadricSystem) -> Dict[str, bool]:
    """Named consistency checks of a presentation against its system."""
    F, n, mu = sys.field, sys.n, sys.mu
    columns = [tuple(v) for v in sys.vectors()]
    expected = n * (n - 1) // 2

    def dot(x: Sequence[int], y: Sequence[int]) -> int:
        acc = 0
        for s, t in zip(x, y):
            acc = F.add(acc, F.mul(s, t))
        return acc

    checks: Dict[str, bool] = {}
    if pres.alpha:
        checks["relation_count"] = len(pres.alpha) == expected and rank(pres.alpha, F) == expected
    else:
        checks["relation_count"] = expected == 0
    checks["relators_vanish"] = all(dot(a, col) == 0 for a in pres.alpha for col in columns)
    checks["relators_match_alpha"] = len(pres.relators) == len(pres.alpha) and all(
        dict(r) == combine_y(mu, a) for r, a in zip(pres.relators, pres.alpha)
    )
    checks["gamma_dual"] = len(pres.gamma) == n and all(
        dot(g, col) == (1 if k == l else 0) for k, g in enumerate(pres.gamma) for l, col in enumerate(columns)
    )
    checks["tau_round_trip"] = all(tau_inv(tau(M)) == M for M in sys.matrices)

    # W against W-perp = U + lifted q_k under <x_i x_j, z_k z_l> = delta
    words = list(product(range(n), repeat=2))
    windex = {w: k for k, w in enumerate(words)}
    w_rows = []
    for r in pres.relators:
        row = [0] * len(words)
        for w, c in r:
            row[windex[w]] = c
        w_rows.append(row)
    perp_rows = []
    for i in range(n):
        for j in range(i + 1, n):
            row = [0] * len(words)
            row[windex[(j, i)]] = 1
            row[windex[(i, j)]] = F.neg(mu(i, j))
            perp_rows.append(row)
    for q in sys.forms:
        row = [0] * len(words)
        for (i, j), c in zip(pairs(n), q.coeffs):
            row[windex[(i, j)]] = c
        perp_rows.append(row)
    checks["koszul_dims"] = (
        (rank(w_rows, F) if w_rows else 0) == expected and rank(perp_rows, F) == n * (n + 1) // 2
    )
    checks["koszul_orthogonal"] = all(dot(w, p) == 0 for w in w_rows for p in perp_rows)
    return checks


def verify_presentation(pres: GscaPresentation, sys: QuadricSystem) -> bool:
    checks = audit_presentation(pres, sys)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        logger.warning("presentation audit failed: %s", ", ".join(failed))
    return not failed
