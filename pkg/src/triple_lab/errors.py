"""Exception hierarchy shared by every module.

The split mirrors the three ways a computation can go wrong: the caller asked
for something outside an operation's contract (UsageError and its cousins),
the inputs are mathematically outside the domain (DomainError), or a numeric
routine failed to deliver its accuracy promise (NumericalFailureError).
The CLI maps these onto exit codes 2 and 3.
"""

from __future__ import annotations


class TripleLabError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(TripleLabError):
    """Malformed arguments, descriptors, or mismatched models."""


class DomainError(TripleLabError):
    """Input lies outside the mathematical domain of the operation."""


class InvalidMapError(UsageError):
    """A holomorphic map was rejected (does not send the ball into the ball)."""


class SingularMatrixError(TripleLabError):
    """Linear system singular to working tolerance.

    Carries the condition-number estimate that triggered the rejection.
    """

    def __init__(self, message: str, condition: float | None = None):
        super().__init__(message)
        self.condition = condition


class NumericalFailureError(TripleLabError):
    """An iterative or decomposition routine failed to meet its tolerance."""
