from __future__ import annotations

from typing import Any, Dict, Optional


class AlgebraError(Exception):
    """Base error. `code` is the machine reason, `exit_code` the CLI status."""

    code = "algebra_error"
    exit_code = 2

    def __init__(self, message: str, *, pointer: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.pointer = pointer
        self.details = details or {}

    def as_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"code": self.code, "message": self.message}
        if self.pointer is not None:
            out["pointer"] = self.pointer
        if self.details:
            out["details"] = self.details
        return out


# ---- input problems (exit 1) ----

class InputError(AlgebraError):
    code = "input_error"
    exit_code = 1


class SchemaError(InputError):
    code = "schema_error"


class MuConstraintViolation(InputError):
    code = "mu_constraint_violation"


class NotMuSymmetric(InputError):
    code = "not_mu_symmetric"


class ParseError(InputError):
    code = "parse_error"

    def __init__(self, message: str, *, offset: int, **kw: Any):
        super().__init__(f"{message} at offset {offset}", **kw)
        self.offset = offset


class NonHomogeneous(InputError):
    code = "non_homogeneous"


class NonPrime(InputError):
    code = "non_prime"


class EvenCharacteristic(InputError):
    code = "even_characteristic"


class ReducibleMinPoly(InputError):
    code = "reducible_min_poly"


class BudgetExceeded(InputError):
    code = "budget_exceeded"


# ---- mathematical checks that failed (exit 2) ----

class DependentMatrices(AlgebraError):
    code = "dependent_matrices"


class CheckFailed(AlgebraError):
    code = "check_failed"


# ---- internal (exit 3) ----

class InternalAssertion(AlgebraError):
    code = "internal_assertion"
    exit_code = 3


class TheoremViolation(InternalAssertion):
    code = "theorem_violation"


class FieldMismatch(InternalAssertion):
    code = "field_mismatch"


class DivisionByZero(InternalAssertion, ZeroDivisionError):
    code = "division_by_zero"


class HypothesisNotVerified(UserWarning):
    """Counting was run on a system whose regularity hypotheses were not checked or failed."""
