"""Exception hierarchy.  Every error carries a short ``code`` used by the CLI."""

from __future__ import annotations

from typing import Optional


class CofkitError(Exception):
    code = "error"

    def __init__(self, message: str = "", *, path: Optional[str] = None, position: Optional[int] = None):
        super().__init__(message)
        self.path = path
        self.position = position

    def diagnostic(self) -> dict:
        return {
            "code": self.code,
            "message": str(self),
            "path": self.path,
            "position": self.position,
        }


class InputError(CofkitError):
    """Errors caused by malformed user input (CLI exit code 2)."""

    code = "input"


# order algebra

class OrderSyntaxError(InputError):
    code = "order-syntax"

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message, position=position)


class InvalidElement(CofkitError):
    code = "invalid-element"


class NotSubset(CofkitError):
    code = "not-subset"


class NotExpressible(CofkitError):
    code = "not-expressible"


# syntax

class FormulaSyntaxError(InputError):
    code = "syntax"

    def __init__(self, message: str, position: Optional[int] = None, expected: Optional[str] = None):
        super().__init__(message, position=position)
        self.expected = expected


class ArityError(InputError):
    code = "arity"


class UnknownSymbol(InputError):
    code = "unknown-symbol"


class FreeVarPolicyError(InputError):
    code = "free-var-policy"


class QuantifierArityError(InputError):
    code = "quantifier-arity"


# semantics

class EvaluationError(CofkitError):
    code = "evaluation"


class SurrogateRequired(EvaluationError):
    code = "surrogate-required"


class SchemaBudgetExceeded(EvaluationError):
    code = "schema-budget"


class UnsupportedAtom(EvaluationError):
    code = "unsupported-atom"


class NonDefinable(EvaluationError):
    code = "non-definable"


class NotALinearOrder(EvaluationError):
    code = "not-a-linear-order"


class NoWitnessEnumerator(EvaluationError):
    code = "no-witness-enumerator"


# passes

class NotPositive(CofkitError):
    code = "not-positive"


class TagHashCollision(CofkitError):
    code = "tag-hash-collision"


class DanglingTag(CofkitError):
    code = "dangling-tag"


class UnsupportedKind(CofkitError):
    code = "unsupported-kind"


class BudgetExceeded(CofkitError):
    code = "budget-exceeded"

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# harness

class NoLiftFound(CofkitError):
    code = "no-lift"


class NoUntaggedRegion(CofkitError):
    code = "no-untagged-region"


class NonClosure(CofkitError):
    code = "non-closure"
