from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy import Poly, isprime, symbols
from sympy.ntheory import sqrt_mod

from .errors import DivisionByZero, EvenCharacteristic, FieldMismatch, NonPrime, ReducibleMinPoly, SchemaError

logger = logging.getLogger(__name__)

# Scalars are plain ints in [0, q). An element of F_{p^k} with coefficient
# vector (c_0, ..., c_{k-1}) against the extension generator t is encoded as
# sum(c_i * p**i); the encoding is canonical, so equality is int equality.
Scalar = int
Point = Tuple[int, ...]

_ADD_TABLE_MAX = 1024
_SQRT_TABLE_MAX = 1 << 16
_T = symbols("t")


@dataclass(frozen=True)
class FieldDesc:
    p: int
    k: int = 1
    min_poly: Optional[Tuple[int, ...]] = None  # monic, highest degree first

    @property
    def order(self) -> int:
        return self.p ** self.k

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"p": self.p, "k": self.k}
        if self.min_poly is not None:
            out["min_poly"] = list(self.min_poly)
        return out


class FiniteField:
    """Common surface of prime and extension fields; elements are ints."""

    def __init__(self, desc: FieldDesc):
        self.desc = desc
        self.p = desc.p
        self.k = desc.k
        self.q = desc.order
        self._sqrt: Optional[Dict[int, Tuple[int, ...]]] = None
        self._embeddings: Dict[FieldDesc, List[int]] = {}

    # -- identity --
    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and other.desc == self.desc

    def __hash__(self) -> int:
        return hash(self.desc)

    def __repr__(self) -> str:
        return f"FiniteField({self.name})"

    def __reduce__(self):
        return (make_field, (self.p, self.k, self.desc.min_poly))

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.k == 1 else f"F{self.p}^{self.k}"

    # -- arithmetic, overridden --
    def add(self, a: int, b: int) -> int:
        raise NotImplementedError

    def neg(self, a: int) -> int:
        raise NotImplementedError

    def mul(self, a: int, b: int) -> int:
        raise NotImplementedError

    def inv(self, a: int) -> int:
        raise NotImplementedError

    def pow(self, a: int, e: int) -> int:
        raise NotImplementedError

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- conversions --
    def from_int(self, value: int) -> int:
        """Image of an integer under Z -> F (lands in the prime subfield)."""
        return value % self.p

    def to_coeffs(self, a: int) -> Tuple[int, ...]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.k:
            raise FieldMismatch(f"{self.name} elements have {self.k} coefficients, got {len(coeffs)}")
        value = 0
        for c in reversed(coeffs):
            value = value * self.p + (c % self.p)
        return value

    def parse(self, raw: Any, pointer: str = "") -> int:
        """JSON scalar -> element: ints (any sign) or length-k coefficient lists."""
        if isinstance(raw, bool):
            raise SchemaError("scalar must be an integer or coefficient list", pointer=pointer)
        if isinstance(raw, int):
            return self.from_int(raw)
        if isinstance(raw, (list, tuple)) and all(isinstance(c, int) and not isinstance(c, bool) for c in raw):
            if len(raw) != self.k:
                raise SchemaError(f"{self.name} scalars need {self.k} coefficients", pointer=pointer)
            return self.from_coeffs(raw)
        raise SchemaError("scalar must be an integer or coefficient list", pointer=pointer)

    def dump(self, a: int) -> Any:
        return a if self.k == 1 else list(self.to_coeffs(a))

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise FieldMismatch(f"{a!r} is not an element of {self.name}")
        return a

    # -- roots --
    def square_roots(self, c: int) -> Tuple[int, ...]:
        """All r with r*r == c, sorted; (0,) for 0 and () for non-squares."""
        if c == 0:
            return (0,)
        if self._sqrt is None:
            self._sqrt = self._build_sqrt_table()
        return self._sqrt.get(c, ())

    def is_square(self, c: int) -> bool:
        return bool(self.square_roots(c))

    def _build_sqrt_table(self) -> Dict[int, Tuple[int, ...]]:
        roots: Dict[int, List[int]] = {}
        for r in range(1, self.q):
            roots.setdefault(self.mul(r, r), []).append(r)
        return {c: tuple(sorted(rs)) for c, rs in roots.items()}

    # -- subfields --
    def embedding_into(self, big: "FiniteField") -> List[int]:
        """Table mapping each element of this field to its image in `big`."""
        if big == self:
            return list(range(self.q))
        if big.p != self.p or big.k % self.k:
            raise FieldMismatch(f"{self.name} does not embed in {big.name}")
        cached = self._embeddings.get(big.desc)
        if cached is not None:
            return cached
        if self.k == 1:
            table = list(range(self.p))
        else:
            poly = [big.from_int(c) for c in self.desc.min_poly or ()]
            root = next(r for r in range(big.q) if _horner(big, poly, r) == 0)
            powers = [1]
            for _ in range(self.k - 1):
                powers.append(big.mul(powers[-1], root))
            table = []
            for a in range(self.q):
                acc = 0
                for c, pw in zip(self.to_coeffs(a), powers):
                    acc = big.add(acc, big.mul(big.from_int(c), pw))
                table.append(acc)
        self._embeddings[big.desc] = table
        return table


class PrimeField(FiniteField):
    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in {self.name}")
        return pow(a, -1, self.p)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def square_roots(self, c: int) -> Tuple[int, ...]:
        if c == 0:
            return (0,)
        if self.p <= _SQRT_TABLE_MAX:
            return super().square_roots(c)
        return tuple(sorted(sqrt_mod(c, self.p, all_roots=True) or ()))


class ExtensionField(FiniteField):
    """F_{p^k} via exp/log tables against a primitive element."""

    def __init__(self, desc: FieldDesc):
        super().__init__(desc)
        self._reduce_by = [(-c) % self.p for c in reversed((desc.min_poly or ())[1:])]  # t^k = sum r_i t^i
        self._digits = [self.to_coeffs(a) for a in range(self.q)]
        self._neg = [self.from_coeffs([-c for c in d]) for d in self._digits]
        self._add: Optional[List[int]] = None
        if self.q <= _ADD_TABLE_MAX:
            self._add = [self._add_digits(a, b) for a in range(self.q) for b in range(self.q)]
        self._exp, self._log = self._build_log_tables()

    def _add_digits(self, a: int, b: int) -> int:
        return self.from_coeffs([x + y for x, y in zip(self._digits[a], self._digits[b])])

    def _poly_mul(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for deg in range(len(prod) - 1, self.k - 1, -1):
            c = prod[deg] % self.p
            if c:
                for i, r in enumerate(self._reduce_by):
                    prod[deg - self.k + i] += c * r
        return self.from_coeffs(prod[: self.k])

    def _build_log_tables(self) -> Tuple[List[int], List[int]]:
        n = self.q - 1
        for g in range(2, self.q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._poly_mul(x, g)
            if len(exp) == n:
                log = [0] * self.q
                for i, v in enumerate(exp):
                    log[v] = i
                logger.debug("%s: primitive element %d", self.name, g)
                return exp, log
        raise ReducibleMinPoly(f"no primitive element found for {self.name}")

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a * self.q + b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self.name}")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise DivisionByZero(f"inverse of 0 in {self.name}")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]


def _horner(F: FiniteField, coeffs_high_first: Sequence[int], x: int) -> int:
    acc = 0
    for c in coeffs_high_first:
        acc = F.add(F.mul(acc, x), c)
    return acc


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    return Poly(list(coeffs), _T, modulus=p).is_irreducible


def least_non_residue(p: int) -> int:
    return next(s for s in range(2, p) if pow(s, (p - 1) // 2, p) == p - 1)


def default_min_poly(p: int, k: int) -> Optional[Tuple[int, ...]]:
    if k == 1:
        return None
    if k == 2:
        return (1, 0, (-least_non_residue(p)) % p)
    for tail in product(range(p), repeat=k):
        cand = (1,) + tail
        if tail[-1] and _is_irreducible(cand, p):
            return cand
    raise ReducibleMinPoly(f"no irreducible polynomial of degree {k} over F{p}")


def make_field(p: int, k: int = 1, min_poly: Optional[Sequence[int]] = None) -> FiniteField:
    """Validated field F_{p^k}; identical inputs return the same instance."""
    return _make_field(p, k, tuple(min_poly) if min_poly is not None else None)


@lru_cache(maxsize=None)
def _make_field(p: int, k: int, min_poly: Optional[Tuple[int, ...]]) -> FiniteField:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise NonPrime(f"{p} is not prime")
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if not isinstance(k, int) or k < 1:
        raise SchemaError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        if min_poly is not None and len(min_poly) > 0:
            raise SchemaError("min_poly is only allowed for k > 1")
        return PrimeField(FieldDesc(p, 1, None))
    if min_poly is None:
        poly = default_min_poly(p, k)
    else:
        poly = tuple(c % p for c in min_poly)
        if len(poly) != k + 1 or poly[0] != 1:
            raise SchemaError(f"min_poly must be monic of degree {k} (highest coefficient first)")
        if not _is_irreducible(poly, p):
            raise ReducibleMinPoly(f"{list(poly)} is reducible over F{p}")
    return ExtensionField(FieldDesc(p, k, poly))


def extension(F: FiniteField, m: int) -> FiniteField:
    """F_{q^m} with the default modulus; use `F.embedding_into` to move scalars up."""
    if m == 1:
        return F
    return make_field(F.p, F.k * m)


def scalar_arith(F: FiniteField, op: str, *operands: int) -> int:
    checked = operands[:1] if op == "pow" else operands
    for a in checked:
        F.check(a)
    if op == "add":
        return F.add(*operands)
    if op == "sub":
        return F.sub(*operands)
    if op == "mul":
        return F.mul(*operands)
    if op == "neg":
        return F.neg(*operands)
    if op == "inv":
        return F.inv(*operands)
    if op == "pow":
        a, e = operands[0], operands[1]
        return F.pow(a, e)
    raise SchemaError(f"unknown scalar operation {op!r}")


def square_roots(F: FiniteField, c: int) -> Tuple[int, ...]:
    return F.square_roots(F.check(c))


def enumerate_field(F: FiniteField) -> Iterator[int]:
    """All elements in canonical order (lexicographic on the coefficient vector read from t^{k-1} down)."""
    return iter(range(F.q))


def projective_count(q: int, n: int) -> int:
    return (q ** n - 1) // (q - 1)


def projective_blocks(F: FiniteField, n: int) -> List[Tuple[Point, int]]:
    """Deterministic partition of P^{n-1}(F) as (prefix, number of free trailing coordinates)."""
    blocks: List[Tuple[Point, int]] = []
    for lead in range(n - 1, -1, -1):
        head = (0,) * lead + (1,)
        free = n - 1 - lead
        if free == 0:
            blocks.append((head, 0))
        else:
            for v in range(F.q):
                blocks.append((head + (v,), free - 1))
    return blocks


def iter_block(F: FiniteField, block: Tuple[Point, int]) -> Iterator[Point]:
    prefix, free = block
    if free == 0:
        yield prefix
        return
    for rest in product(range(F.q), repeat=free):
        yield prefix + rest


def enumerate_projective(F: FiniteField, n: int) -> Iterator[Point]:
    """Points of P^{n-1}(F), first nonzero coordinate 1, in lexicographic order."""
    if n < 1:
        raise SchemaError("projective enumeration needs n >= 1")
    for block in projective_blocks(F, n):
        yield from iter_block(F, block)


def normalize_projective(F: FiniteField, vec: Sequence[int]) -> Optional[Point]:
    """Scale so the first nonzero coordinate is 1; None for the zero vector."""
    for c in vec:
        if c:
            if c == 1:
                return tuple(vec)
            s = F.inv(c)
            return tuple(F.mul(s, x) for x in vec)
    return None
