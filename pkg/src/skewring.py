from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import FieldMismatch, MuConstraintViolation, SchemaError
from .exactfield import FiniteField
from .linalg import rref, solve

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class MuMatrix:
    """Structure constants of S: z_j z_i = mu[i][j] z_i z_j (0-based indices)."""

    field: FiniteField
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        F, n = self.field, len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise SchemaError("mu must be square", pointer=f"/mu/{i}")
            for j, x in enumerate(row):
                if not isinstance(x, int) or not 0 <= x < F.q:
                    raise FieldMismatch(f"mu[{i}][{j}] is not in {F.name}")
                if i == j and x != 1:
                    raise MuConstraintViolation(f"mu_{i+1}{i+1} must be 1", pointer=f"/mu/{i}/{j}")
                if x == 0:
                    raise MuConstraintViolation(f"mu_{i+1}{j+1} must be nonzero", pointer=f"/mu/{i}/{j}")
                if i < j and F.mul(x, self.entries[j][i]) != 1:
                    raise MuConstraintViolation(
                        f"mu_{i+1}{j+1} * mu_{j+1}{i+1} must be 1", pointer=f"/mu/{j}/{i}"
                    )

    @property
    def n(self) -> int:
        return len(self.entries)

    def __call__(self, i: int, j: int) -> int:
        return self.entries[i][j]

    @classmethod
    def identity(cls, F: FiniteField, n: int) -> "MuMatrix":
        return cls(F, tuple(tuple(1 for _ in range(n)) for _ in range(n)))

    @classmethod
    def from_upper(cls, F: FiniteField, n: int, upper: Mapping[Tuple[int, int], int]) -> "MuMatrix":
        """Build from mu_ij for i < j (missing pairs default to 1); mu_ji = mu_ij^-1."""
        rows = [[1] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not i < j:
                raise SchemaError(f"upper entries need i < j, got {(i, j)}")
            v = F.check(v)
            if v == 0:
                raise MuConstraintViolation(f"mu_{i+1}{j+1} must be nonzero")
            rows[i][j] = v
            rows[j][i] = F.inv(v)
        return cls(F, tuple(tuple(r) for r in rows))

    def is_identity(self) -> bool:
        return all(x == 1 for row in self.entries for x in row)

    def over(self, big: FiniteField) -> "MuMatrix":
        emb = self.field.embedding_into(big)
        return MuMatrix(big, tuple(tuple(emb[x] for x in row) for row in self.entries))

    def as_json(self) -> List[List[object]]:
        return [[self.field.dump(x) for x in row] for row in self.entries]


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> Tuple[Monomial, ...]:
    """Degree-d exponent vectors in descending lexicographic order (z_1^d first)."""
    if n == 0:
        return ((),) if d == 0 else ()
    out: List[Monomial] = []
    for e in range(d, -1, -1):
        for rest in monomials(n - 1, d - e):
            out.append((e,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials(n, d))}


def monomial_product(mu: MuMatrix, e: Monomial, f: Monomial) -> Tuple[int, Monomial]:
    """z^e * z^f = c * z^(e+f); each z_s of f passes every z_l of e with l > s."""
    F = mu.field
    c = 1
    for s, fs in enumerate(f):
        if not fs:
            continue
        for l in range(s + 1, len(e)):
            if e[l]:
                c = F.mul(c, F.pow(mu(s, l), e[l] * fs))
    return c, tuple(a + b for a, b in zip(e, f))


class SkewPoly:
    """Element of S in normal-ordered monomial basis."""

    __slots__ = ("mu", "terms")

    def __init__(self, mu: MuMatrix, terms: Optional[Mapping[Monomial, int]] = None):
        self.mu = mu
        self.terms: Dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @property
    def field(self) -> FiniteField:
        return self.mu.field

    @classmethod
    def generator(cls, mu: MuMatrix, i: int) -> "SkewPoly":
        return cls(mu, {tuple(1 if t == i else 0 for t in range(mu.n)): 1})

    @classmethod
    def constant(cls, mu: MuMatrix, c: int) -> "SkewPoly":
        return cls(mu, {(0,) * mu.n: c})

    @classmethod
    def linear(cls, mu: MuMatrix, coeffs: Sequence[int]) -> "SkewPoly":
        n = mu.n
        return cls(mu, {tuple(1 if t == i else 0 for t in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def from_vector(cls, mu: MuMatrix, d: int, vec: Sequence[int]) -> "SkewPoly":
        return cls(mu, dict(zip(monomials(mu.n, d), vec)))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {sum(m) for m in self.terms}

    @property
    def degree(self) -> Optional[int]:
        """Homogeneous degree, or None for zero / mixed-degree elements."""
        ds = self.degrees()
        return ds.pop() if len(ds) == 1 else None

    def vector(self, d: int) -> List[int]:
        index = monomial_index(self.mu.n, d)
        vec = [0] * len(index)
        for m, c in self.terms.items():
            if sum(m) != d:
                raise SchemaError(f"term of degree {sum(m)} in a degree-{d} vector")
            vec[index[m]] = c
        return vec

    def _same_ring(self, other: "SkewPoly") -> None:
        if other.mu != self.mu:
            raise FieldMismatch("operands live in different skew rings")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SkewPoly) and other.mu == self.mu and other.terms == self.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        self._same_ring(other)
        F = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = F.add(out.get(m, 0), c)
        return SkewPoly(self.mu, out)

    def __neg__(self) -> "SkewPoly":
        return self.scale(self.field.neg(1))

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def scale(self, c: int) -> "SkewPoly":
        F = self.field
        return SkewPoly(self.mu, {m: F.mul(c, x) for m, x in self.terms.items()})

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        return poly_multiply(self, other)

    def __pow__(self, e: int) -> "SkewPoly":
        acc = SkewPoly.constant(self.mu, 1)
        for _ in range(e):
            acc = acc * self
        return acc

    def render(self) -> str:
        """Expression-parser syntax, terms in descending lexicographic order."""
        if not self.terms:
            return "0"
        F = self.field
        parts: List[str] = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            word = "*".join(
                f"z{i+1}" if e == 1 else f"z{i+1}^{e}" for i, e in enumerate(m) if e
            )
            coeff = render_scalar(F, c)
            if not word:
                parts.append(coeff)
            elif c == 1:
                parts.append(word)
            else:
                parts.append(f"{coeff}*{word}")
        return " + ".join(parts)

    def as_json(self) -> Dict[str, object]:
        F = self.field
        out: Dict[str, object] = {}
        for m in sorted(self.terms, reverse=True):
            key = "*".join(f"z{i+1}" if e == 1 else f"z{i+1}^{e}" for i, e in enumerate(m) if e) or "1"
            out[key] = F.dump(self.terms[m])
        return out

    def __repr__(self) -> str:
        return f"SkewPoly({self.render()})"


def render_scalar(F: FiniteField, c: int) -> str:
    return str(c) if F.k == 1 else "[" + ",".join(str(x) for x in F.to_coeffs(c)) + "]"


def normal_form_word(word: Sequence[int], coeff: int, mu: MuMatrix) -> SkewPoly:
    """Rewrite z_{w0} z_{w1} ... (0-based indices) into normal order.

    Each inversion (larger index left of a smaller one) contributes mu[small][large].
    """
    F = mu.field
    n = mu.n
    for i in word:
        if not 0 <= i < n:
            raise SchemaError(f"generator index {i + 1} out of range 1..{n}")
    c = coeff
    for a in range(len(word)):
        for b in range(a + 1, len(word)):
            hi, lo = word[a], word[b]
            if hi > lo:
                c = F.mul(c, mu(lo, hi))
    exps = [0] * n
    for i in word:
        exps[i] += 1
    return SkewPoly(mu, {tuple(exps): c})


def poly_multiply(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    f._same_ring(g)
    F = f.field
    out: Dict[Monomial, int] = {}
    for e, a in f.terms.items():
        for h, b in g.terms.items():
            c, m = monomial_product(f.mu, e, h)
            out[m] = F.add(out.get(m, 0), F.mul(F.mul(a, b), c))
    return SkewPoly(f.mu, out)


def graded_ideal_piece(gens: Iterable[SkewPoly], d: int, mu: MuMatrix) -> List[List[int]]:
    """Row-reduced basis of the degree-d part of the two-sided ideal generated by `gens`."""
    F = mu.field
    rows: List[List[int]] = []
    for g in gens:
        dg = g.degree
        if g.is_zero():
            continue
        if dg is None:
            raise SchemaError("ideal generators must be homogeneous")
        if dg > d:
            continue
        for d1 in range(d - dg + 1):
            for m1 in monomials(mu.n, d1):
                left = SkewPoly(mu, {m1: 1}) * g
                for m2 in monomials(mu.n, d - dg - d1):
                    rows.append((left * SkewPoly(mu, {m2: 1})).vector(d))
    reduced, _ = rref(rows, F)
    return reduced


@dataclass
class NormalityCertificate:
    normal: bool
    # side -> generator index -> coefficients c_j with q z_i = sum_j c_j z_j q (mod ideal), or the reverse
    right_to_left: Dict[int, List[int]] = field(default_factory=dict)
    left_to_right: Dict[int, List[int]] = field(default_factory=dict)
    reason: str = ""


def is_normal_element(q: SkewPoly, prior: Sequence[SkewPoly]) -> NormalityCertificate:
    """Degree-3 normality test of a quadratic q in S / <prior>."""
    if q.is_zero():
        raise SchemaError("normality test needs a nonzero element")
    mu = q.mu
    F, n = mu.field, mu.n
    ideal = graded_ideal_piece(prior, 3, mu)
    gens = [SkewPoly.generator(mu, i) for i in range(n)]
    zq = [(z * q).vector(3) for z in gens]
    qz = [(q * z).vector(3) for z in gens]
    cert = NormalityCertificate(normal=True)

    for side, target_vecs, span_vecs, store in (
        ("qz", qz, zq, cert.right_to_left),
        ("zq", zq, qz, cert.left_to_right),
    ):
        columns = span_vecs + ideal
        matrix = [list(r) for r in zip(*columns)]
        for i, target in enumerate(target_vecs):
            x = solve(matrix, target, F)
            if x is None:
                cert.normal = False
                cert.reason = f"{side}_not_in_span:z{i+1}"
                return cert
            store[i] = x[:n]
    return cert


@dataclass
class NormalizingReport:
    normalizing: bool
    policy: str
    order: Optional[Tuple[int, ...]] = None
    certificates: List[NormalityCertificate] = field(default_factory=list)
    reason: str = ""


def _check_order(forms: Sequence[SkewPoly], order: Sequence[int]) -> Tuple[bool, List[NormalityCertificate], str]:
    certs: List[NormalityCertificate] = []
    for t, idx in enumerate(order):
        cert = is_normal_element(forms[idx], [forms[j] for j in order[:t]])
        certs.append(cert)
        if not cert.normal:
            return False, certs, f"q{idx+1}_not_normal:{cert.reason}"
    return True, certs, ""


def check_normalizing_sequence(forms: Sequence[SkewPoly], policy: str = "given") -> NormalizingReport:
    if policy not in ("given", "search"):
        raise SchemaError(f"unknown order policy {policy!r}")
    n = len(forms)
    if policy == "given":
        ok, certs, reason = _check_order(forms, range(n))
        return NormalizingReport(ok, policy, tuple(range(n)) if ok else None, certs, reason)
    first_reason = ""
    for order in permutations(range(n)):
        ok, certs, reason = _check_order(forms, order)
        if ok:
            logger.debug("normalizing order found: %s", order)
            return NormalizingReport(True, policy, tuple(order), certs)
        first_reason = first_reason or reason
    return NormalizingReport(False, policy, None, [], f"no_order:{first_reason}")
