"""Domain exceptions.

Each error also derives from the builtin a caller would naturally catch, so code
that only knows about ``ValueError`` or ``LookupError`` keeps working.
"""
from __future__ import annotations

from typing import Optional


class RelHilbError(Exception):
    """Root of every error raised by the engine."""


class NonUnitConstantTerm(RelHilbError, ValueError):
    pass


class InexactDivision(RelHilbError, ValueError):
    pass


class NegativeOrFractionalBetti(RelHilbError, ValueError):
    pass


class InvalidCycle(RelHilbError, ValueError):
    pass


class ExpressionParseError(RelHilbError, ValueError):
    """Cycle-expression text could not be parsed.

    ``position`` is the 0-based offset of the offending character.
    """

    def __init__(self, message: str, *, text: str = "", position: Optional[int] = None) -> None:
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class TargetNotFound(RelHilbError, LookupError):
    pass


class FactorsNotFound(RelHilbError, LookupError):
    pass


class RelationNotHomogeneous(RelHilbError, AssertionError):
    pass


class PreconditionViolated(RelHilbError, ValueError):
    pass


class NonTermination(RelHilbError, RuntimeError):
    pass


class RewriteFailed(RelHilbError, RuntimeError):
    pass


__all__ = [
    "ExpressionParseError",
    "FactorsNotFound",
    "InexactDivision",
    "InvalidCycle",
    "NegativeOrFractionalBetti",
    "NonTermination",
    "NonUnitConstantTerm",
    "PreconditionViolated",
    "RelHilbError",
    "RelationNotHomogeneous",
    "RewriteFailed",
    "TargetNotFound",
]
