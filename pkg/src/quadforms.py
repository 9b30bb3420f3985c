from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import NotMuSymmetric, SchemaError, TheoremViolation
from .exactfield import FiniteField, Point, enumerate_projective, extension, normalize_projective, projective_count
from .linalg import rank, solve
from .skewring import MuMatrix, SkewPoly
from .sweep import ensure_budget

logger = logging.getLogger(__name__)

MU_RANK_UNKNOWN = "not<=2"
MuRank = Union[int, str]


@lru_cache(maxsize=None)
def pairs(n: int) -> Tuple[Tuple[int, int], ...]:
    """(i, j) with i <= j in lexicographic order; matches the degree-2 monomial order."""
    return tuple((i, j) for i in range(n) for j in range(i, n))


@lru_cache(maxsize=None)
def pair_index(n: int) -> Dict[Tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


@dataclass(frozen=True)
class QuadraticForm:
    """Element of S_2 as coefficients c_ij of z_i z_j, i <= j."""

    mu: MuMatrix
    coeffs: Tuple[int, ...]

    @property
    def field(self) -> FiniteField:
        return self.mu.field

    @classmethod
    def zero(cls, mu: MuMatrix) -> "QuadraticForm":
        return cls(mu, (0,) * len(pairs(mu.n)))

    @classmethod
    def from_poly(cls, poly: SkewPoly) -> "QuadraticForm":
        if not poly.is_zero() and poly.degree != 2:
            raise SchemaError("quadratic forms must be homogeneous of degree 2")
        return cls(poly.mu, tuple(poly.vector(2)))

    def poly(self) -> SkewPoly:
        return SkewPoly.from_vector(self.mu, 2, self.coeffs)

    def coeff(self, i: int, j: int) -> int:
        return self.coeffs[pair_index(self.mu.n)[(min(i, j), max(i, j))]]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> Optional[Tuple[int, ...]]:
        return normalize_projective(self.field, self.coeffs)

    def over(self, big: FiniteField) -> "QuadraticForm":
        emb = self.field.embedding_into(big)
        return QuadraticForm(self.mu.over(big), tuple(emb[c] for c in self.coeffs))

    def render(self) -> str:
        return self.poly().render()


@dataclass(frozen=True)
class MuSymMatrix:
    mu: MuMatrix
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        F, n = self.mu.field, self.mu.n
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise SchemaError(f"matrix must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if self.entries[i][j] != F.mul(self.mu(i, j), self.entries[j][i]):
                    raise NotMuSymmetric(
                        f"M_{i+1}{j+1} != mu_{i+1}{j+1} * M_{j+1}{i+1}", pointer=f"/{i}/{j}"
                    )

    @classmethod
    def from_vector(cls, mu: MuMatrix, vec: Sequence[int]) -> "MuSymMatrix":
        """Upper-triangular coordinates (i <= j) -> full matrix via M_ji = mu_ji M_ij."""
        F, n = mu.field, mu.n
        rows = [[0] * n for _ in range(n)]
        for (i, j), x in zip(pairs(n), vec):
            rows[i][j] = x
            if i != j:
                rows[j][i] = F.mul(mu(j, i), x)
        return cls(mu, tuple(tuple(r) for r in rows))

    def vector(self) -> Tuple[int, ...]:
        return tuple(self.entries[i][j] for i, j in pairs(self.mu.n))

    def over(self, big: FiniteField) -> "MuSymMatrix":
        emb = self.mu.field.embedding_into(big)
        return MuSymMatrix(self.mu.over(big), tuple(tuple(emb[x] for x in row) for row in self.entries))

    def as_json(self) -> List[List[object]]:
        F = self.mu.field
        return [[F.dump(x) for x in row] for row in self.entries]


@dataclass(frozen=True)
class Factorization:
    """Q = left * right; left has first nonzero coefficient 1."""

    left: Point
    right: Point

    def render(self, mu: MuMatrix) -> str:
        return f"({SkewPoly.linear(mu, self.left).render()})*({SkewPoly.linear(mu, self.right).render()})"

    def is_square_of(self, F: FiniteField) -> bool:
        """right = lambda * left with lambda a square, i.e. the form is some L^2."""
        lead = next(k for k, x in enumerate(self.left) if x)
        lam = self.right[lead]
        if any(F.mul(lam, x) != y for x, y in zip(self.left, self.right)):
            return False
        return F.is_square(lam)


@dataclass(frozen=True)
class FactorizationSet:
    factorizations: Tuple[Factorization, ...]
    mu_rank_label: MuRank

    def __len__(self) -> int:
        return len(self.factorizations)


# ---- tau and Phi ----

def tau(M: MuSymMatrix) -> QuadraticForm:
    """z^T M z: c_ii = M_ii and c_ij = M_ij + mu_ij M_ji = 2 M_ij for i < j."""
    F = M.mu.field
    return QuadraticForm(
        M.mu, tuple(M.entries[i][i] if i == j else F.add(M.entries[i][j], M.entries[i][j]) for i, j in pairs(M.mu.n))
    )


def tau_inv(Q: QuadraticForm) -> MuSymMatrix:
    F = Q.field
    half = F.inv(F.from_int(2))
    vec = [c if i == j else F.mul(half, c) for (i, j), c in zip(pairs(Q.mu.n), Q.coeffs)]
    return MuSymMatrix.from_vector(Q.mu, vec)


def phi(a: Sequence[int], b: Sequence[int], mu: MuMatrix) -> MuSymMatrix:
    F, n = mu.field, mu.n
    rows = tuple(
        tuple(F.add(F.mul(a[i], b[j]), F.mul(mu(i, j), F.mul(a[j], b[i]))) for j in range(n)) for i in range(n)
    )
    return MuSymMatrix(mu, rows)


def product_form(a: Sequence[int], b: Sequence[int], mu: MuMatrix) -> Tuple[int, ...]:
    """Coefficients of (sum a_i z_i)(sum b_i z_i)."""
    F = mu.field
    out = []
    for i, j in pairs(mu.n):
        if i == j:
            out.append(F.mul(a[i], b[i]))
        else:
            out.append(F.add(F.mul(a[i], b[j]), F.mul(mu(i, j), F.mul(a[j], b[i]))))
    return tuple(out)


# ---- factorization engine ----

def _canonical(F: FiniteField, a: Sequence[int], b: Sequence[int]) -> Factorization:
    lead = next(x for x in a if x)
    s = F.inv(lead)
    return Factorization(tuple(F.mul(s, x) for x in a), tuple(F.mul(lead, x) for x in b))


def _pivot_candidates(c: Sequence[int], mu: MuMatrix, i: int) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Some c_ii != 0: fix a_i = 1, b_i = c_ii; every other coordinate solves one quadratic."""
    F, n = mu.field, mu.n
    idx = pair_index(n)
    d = c[idx[(i, i)]]
    four = F.from_int(4)
    choices: List[List[Tuple[int, int]]] = []
    for j in range(n):
        if j == i:
            choices.append([(1, d)])
            continue
        v = F.neg(F.mul(mu(i, j), d))
        u = c[idx[(i, j)]] if i < j else F.mul(mu(i, j), c[idx[(j, i)]])
        disc = F.add(F.mul(u, u), F.mul(four, F.mul(v, c[idx[(j, j)]])))
        roots = F.square_roots(disc)
        if not roots:
            return
        inv2v = F.inv(F.add(v, v))
        sols = []
        for r in roots:
            aj = F.mul(F.sub(r, u), inv2v)
            sols.append((aj, F.add(u, F.mul(v, aj))))
        choices.append(sols)
    for combo in product(*choices):
        yield tuple(x for x, _ in combo), tuple(y for _, y in combo)


def _bipartite_candidates(c: Sequence[int], mu: MuMatrix) -> Iterator[Tuple[List[int], List[int]]]:
    """All c_ii = 0: supports of the factors are the two sides of the complete bipartite nonzero pattern."""
    F, n = mu.field, mu.n
    idx = pair_index(n)
    adj: Dict[int, List[int]] = {}
    for (i, j), k in idx.items():
        if i != j and c[k]:
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
    if not adj:
        return
    start = min(adj)
    color = {start: 0}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in color:
                color[w] = 1 - color[v]
                stack.append(w)
    if len(color) != len(adj):
        return
    sides = (sorted(v for v, s in color.items() if s == 0), sorted(v for v, s in color.items() if s == 1))

    def cross(i: int, j: int) -> int:
        # coefficient of z_min z_max contributed by a_i b_j alone
        return c[idx[(i, j)]] if i < j else F.mul(mu(i, j), c[idx[(j, i)]])

    for A, B in (sides, sides[::-1]):
        a, b = [0] * n, [0] * n
        i0, j0 = A[0], B[0]
        a[i0] = 1
        for j in B:
            b[j] = cross(i0, j)
        if not b[j0]:
            continue
        inv_b = F.inv(b[j0])
        for i in A[1:]:
            a[i] = F.mul(cross(i, j0), inv_b)
        yield a, b


def _label(Q: QuadraticForm, facts: Sequence[Factorization]) -> MuRank:
    if Q.is_zero():
        return 0
    if any(f.is_square_of(Q.field) for f in facts):
        return 1
    return 2 if facts else MU_RANK_UNKNOWN


def _finish(Q: QuadraticForm, found: set) -> FactorizationSet:
    # two is a bound only in two variables or when S is commutative; for n >= 3
    # a twisted mu can give more (z1^2 - z2^2 - z3^2 with mu_23 = -1 has four)
    if len(found) > 2 and (Q.mu.n <= 2 or Q.mu.is_identity()):
        raise TheoremViolation(
            f"{Q.render()} has {len(found)} distinct factorizations",
            details={"form": Q.render(), "count": len(found)},
        )
    facts = tuple(sorted(found, key=lambda f: (f.left, f.right)))
    return FactorizationSet(facts, _label(Q, facts))


def factorizations(Q: QuadraticForm, F: Optional[FiniteField] = None) -> FactorizationSet:
    """Every Q = L1 * L2 with L1, L2 in S_1 over F, up to (L1, L2) ~ (s L1, s^-1 L2)."""
    if F is not None and F != Q.field:
        Q = Q.over(F)
    if Q.is_zero():
        return FactorizationSet((), 0)
    mu, c = Q.mu, Q.coeffs
    idx = pair_index(mu.n)
    pivot = next((i for i in range(mu.n) if c[idx[(i, i)]]), None)
    if pivot is not None:
        candidates = _pivot_candidates(c, mu, pivot)
    else:
        candidates = _bipartite_candidates(c, mu)
    found = set()
    for a, b in candidates:
        if product_form(a, b, mu) == c:
            found.add(_canonical(Q.field, a, b))
    return _finish(Q, found)


def factorizations_sweep(Q: QuadraticForm, F: Optional[FiniteField] = None, budget: Optional[int] = None) -> FactorizationSet:
    """Oracle: try every left factor a in P^{n-1}(F) and solve a*b = Q linearly for b."""
    if F is not None and F != Q.field:
        Q = Q.over(F)
    mu, n, G = Q.mu, Q.mu.n, Q.field
    if budget is not None:
        ensure_budget(projective_count(G.q, n), budget, "factorization sweep")
    if Q.is_zero():
        return FactorizationSet((), 0)
    found = set()
    for a in enumerate_projective(G, n):
        rows = []
        for i, j in pairs(n):
            row = [0] * n
            if i == j:
                row[i] = a[i]
            else:
                row[j] = a[i]
                row[i] = G.mul(mu(i, j), a[j])
            rows.append(row)
        b = solve(rows, Q.coeffs, G)
        if b is not None:
            found.add(Factorization(a, tuple(b)))
    return _finish(Q, found)


def mu_rank(Q: QuadraticForm, F: Optional[FiniteField] = None, max_ext: int = 2) -> MuRank:
    """0, 1 (a square L^2), 2 (a non-square product) or not<=2, over F and extensions of degree <= max_ext."""
    if max_ext < 1:
        raise SchemaError("max_ext must be >= 1")
    base = F or Q.field
    if Q.is_zero():
        return 0
    best: MuRank = MU_RANK_UNKNOWN
    for m in range(1, max_ext + 1):
        G = extension(base, m)
        label = factorizations(Q if G == Q.field else Q.over(G)).mu_rank_label
        if label == 1:
            return 1
        if label == 2:
            best = 2
    return best


def classical_rank(M: Union[MuSymMatrix, Sequence[Sequence[int]]], F: Optional[FiniteField] = None) -> int:
    if isinstance(M, MuSymMatrix):
        return rank(M.entries, M.mu.field)
    if F is None:
        raise SchemaError("classical_rank of a plain matrix needs its field")
    return rank(M, F)
