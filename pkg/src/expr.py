"""Form expressions such as "(z1+2*z2)^2" or "4*z1^2 - z2*z3", expanded with skew multiplication."""

from __future__ import annotations

import re
from typing import Any, List, Mapping, Optional, Tuple

from .errors import NonHomogeneous, ParseError, SchemaError
from .quadforms import QuadraticForm
from .skewring import MuMatrix, SkewPoly

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|z(?P<gen>\d+)|(?P<op>[-+*/^()\[\],])|(?P<bad>\S))")

Token = Tuple[str, str, int]  # kind, text, offset


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group('bad')!r}", offset=m.start("bad"))
        # a generator token starts at its z
        tokens.append((kind, m.group(kind), m.start(kind) - (kind == "gen")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, mu: MuMatrix):
        self.tokens = tokenize(text)
        self.pos = 0
        self.mu = mu
        self.F = mu.field

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def take(self, text: Optional[str] = None) -> Token:
        tok = self.current
        if text is not None and tok[1] != text:
            wanted = repr(text)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {wanted}, got {got}", offset=tok[2])
        self.pos += 1
        return tok

    def parse(self) -> SkewPoly:
        value = self.expr()
        if self.current[0] != "end":
            raise ParseError(f"unexpected {self.current[1]!r}", offset=self.current[2])
        return value

    def expr(self) -> SkewPoly:
        value = self.term()
        while self.current[0] == "op" and self.current[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> SkewPoly:
        value = self.factor()
        while self.current[0] == "op" and self.current[1] in ("*", "/"):
            _, op, offset = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                value = value.scale(self._scalar_inverse(rhs, offset))
        return value

    def _scalar_inverse(self, value: SkewPoly, offset: int) -> int:
        if value.is_zero() or value.degrees() != {0}:
            raise ParseError("can only divide by a nonzero scalar", offset=offset)
        return self.F.inv(next(iter(value.terms.values())))

    def factor(self) -> SkewPoly:
        if self.current[0] == "op" and self.current[1] in ("+", "-"):
            sign = self.take()[1]
            value = self.factor()
            return -value if sign == "-" else value
        base = self.primary()
        if self.current[0] == "op" and self.current[1] == "^":
            self.take()
            tok = self.current
            if tok[0] != "num":
                raise ParseError("exponent must be a non-negative integer", offset=tok[2])
            self.take()
            base = base ** int(tok[1])
        return base

    def primary(self) -> SkewPoly:
        kind, text, offset = self.current
        if kind == "num":
            self.take()
            return SkewPoly.constant(self.mu, self.F.from_int(int(text)))
        if kind == "gen":
            self.take()
            idx = int(text)
            if not 1 <= idx <= self.mu.n:
                raise ParseError(f"generator z{idx} out of range z1..z{self.mu.n}", offset=offset)
            return SkewPoly.generator(self.mu, idx - 1)
        if text == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if text == "[":
            return SkewPoly.constant(self.mu, self._coeff_list())
        got = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"expected a term, got {got}", offset=offset)

    def _coeff_list(self) -> int:
        offset = self.take("[")[2]
        coeffs = []
        while True:
            sign = 1
            if self.current[1] == "-":
                self.take()
                sign = -1
            tok = self.current
            if tok[0] != "num":
                raise ParseError("expected an integer coefficient", offset=tok[2])
            self.take()
            coeffs.append(sign * int(tok[1]))
            if self.current[1] == ",":
                self.take()
                continue
            self.take("]")
            break
        if len(coeffs) != self.F.k:
            raise ParseError(f"{self.F.name} scalars need {self.F.k} coefficients", offset=offset)
        return self.F.from_coeffs(coeffs)


def parse_poly(text: str, mu: MuMatrix) -> SkewPoly:
    return _Parser(text, mu).parse()


def parse_form_expression(text: str, mu: MuMatrix) -> QuadraticForm:
    poly = parse_poly(text, mu)
    if not poly.is_zero() and poly.degrees() != {2}:
        raise NonHomogeneous(
            f"{text!r} is not homogeneous of degree 2 (degrees {sorted(poly.degrees())})",
            details={"degrees": sorted(poly.degrees())},
        )
    return QuadraticForm.from_poly(poly)


def form_from_json(raw: Any, mu: MuMatrix, pointer: str = "") -> QuadraticForm:
    """A form given as an expression string or a {"z1*z2": c, ...} coefficient map."""
    if isinstance(raw, str):
        try:
            return parse_form_expression(raw, mu)
        except (ParseError, NonHomogeneous) as e:
            e.pointer = pointer
            raise
    if not isinstance(raw, Mapping):
        raise SchemaError("a form is an expression string or a coefficient map", pointer=pointer)
    acc = SkewPoly(mu)
    for key, value in raw.items():
        c = mu.field.parse(value, f"{pointer}/{key}")
        try:
            acc = acc + parse_poly(key, mu).scale(c)
        except ParseError as e:
            e.pointer = f"{pointer}/{key}"
            raise
    if not acc.is_zero() and acc.degrees() != {2}:
        raise NonHomogeneous("coefficient map is not homogeneous of degree 2", pointer=pointer)
    return QuadraticForm.from_poly(acc)
