from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, ValidationError, model_validator

from .errors import AlgebraError, SchemaError
from .exactfield import FiniteField, make_field
from .expr import form_from_json
from .quadforms import MuSymMatrix
from .quadsys import QuadricSystem
from .skewring import MuMatrix

Scalar = Union[StrictInt, List[StrictInt]]


class FieldBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: StrictInt
    k: StrictInt = 1
    min_poly: Optional[List[StrictInt]] = None


class OptionsBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_ext: Optional[int] = Field(None, ge=1)
    order_policy: Optional[Literal["given", "search"]] = None
    budget: Optional[int] = Field(None, ge=1)
    hilbert_max_degree: Optional[int] = Field(None, ge=0)


class DocumentBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: FieldBody
    n: int = Field(ge=1)
    mu: List[List[Scalar]]
    matrices: Optional[List[List[List[Scalar]]]] = None
    forms: Optional[List[Union[str, dict]]] = None
    options: OptionsBody = OptionsBody()
    description: Optional[str] = None
    assumptions: List[str] = []

    @model_validator(mode="after")
    def one_source(self) -> "DocumentBody":
        if (self.matrices is None) == (self.forms is None):
            raise ValueError("give exactly one of 'matrices' or 'forms'")
        return self


@dataclass(frozen=True)
class InputDocument:
    field: FiniteField
    mu: MuMatrix
    system: QuadricSystem
    options: OptionsBody
    description: Optional[str] = None
    assumptions: tuple = ()

    @property
    def n(self) -> int:
        return self.mu.n


def _pointer(e: ValidationError) -> str:
    loc = e.errors()[0].get("loc", ())
    return "/" + "/".join(str(x) for x in loc) if loc else ""


def _square(rows: List[List[Any]], n: int, pointer: str) -> None:
    if len(rows) != n:
        raise SchemaError(f"expected {n} rows, got {len(rows)}", pointer=pointer)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise SchemaError(f"expected {n} entries, got {len(row)}", pointer=f"{pointer}/{i}")


def parse_input(data: Union[bytes, str]) -> InputDocument:
    """Validate a JSON document and build its field, mu and quadric system."""
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        raw = json.loads(text)
    except UnicodeDecodeError as e:
        raise SchemaError("input is not UTF-8", pointer="") from e
    except json.JSONDecodeError as e:
        raise SchemaError(f"input is not valid JSON: {e.msg} (line {e.lineno})", pointer="") from e

    try:
        body = DocumentBody.model_validate(raw)
    except ValidationError as e:
        raise SchemaError(e.errors()[0]["msg"], pointer=_pointer(e)) from e

    try:
        F = make_field(body.field.p, body.field.k, body.field.min_poly)
    except AlgebraError as e:
        e.pointer = e.pointer or "/field"
        raise

    n = body.n
    _square(body.mu, n, "/mu")
    mu = MuMatrix(F, tuple(tuple(F.parse(x, f"/mu/{i}/{j}") for j, x in enumerate(row)) for i, row in enumerate(body.mu)))

    if body.matrices is not None:
        if len(body.matrices) != n:
            raise SchemaError(f"expected {n} matrices, got {len(body.matrices)}", pointer="/matrices")
        matrices = []
        for k, rows in enumerate(body.matrices):
            base = f"/matrices/{k}"
            _square(rows, n, base)
            entries = tuple(tuple(F.parse(x, f"{base}/{i}/{j}") for j, x in enumerate(row)) for i, row in enumerate(rows))
            try:
                matrices.append(MuSymMatrix(mu, entries))
            except AlgebraError as e:
                e.pointer = base + (e.pointer or "")
                raise
        system = QuadricSystem(mu, tuple(matrices))
    else:
        if len(body.forms) != n:
            raise SchemaError(f"expected {n} forms, got {len(body.forms)}", pointer="/forms")
        forms = [form_from_json(raw_form, mu, f"/forms/{k}") for k, raw_form in enumerate(body.forms)]
        system = QuadricSystem.from_forms(mu, forms)

    return InputDocument(F, mu, system, body.options, body.description, tuple(body.assumptions))


def load_input(path: str) -> InputDocument:
    with open(path, "rb") as fp:
        return parse_input(fp.read())
