"""Exception hierarchy shared by all volq modules.

Every error raised out of a public operation carries the originating
``module.operation`` in ``op`` so the CLI can name the failing stage.
"""
from __future__ import annotations


class VolqError(Exception):
    """Base class for all volq errors."""

    def __init__(self, message: str, *, op: str | None = None):
        self.op = op
        super().__init__(message)

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.op}: {msg}" if self.op else msg


class TooShort(VolqError):
    """Series has fewer observations than the operation requires."""


class NonPositiveValue(VolqError):
    """An input value is zero or negative where positivity is required."""


class DegenerateVariance(VolqError):
    """Series has zero variance; the statistic is undefined."""


class InvalidParams(VolqError):
    """Model parameters violate their domain constraints."""


class InvalidFit(VolqError):
    """A fit object is unusable for the requested operation."""


class NonConvergence(VolqError):
    """An iterative estimation failed to converge."""


class SingularRegression(VolqError):
    """Design matrix of an internal regression is rank-deficient."""


class SingularHessian(VolqError):
    """Hessian at the optimum could not be inverted."""


class NumericalOverflow(VolqError):
    """A quantity left the representable floating-point range."""


class NonFiniteObjective(VolqError):
    """Objective function returned NaN or infinity."""


class ParseError(VolqError):
    """Input file could not be parsed."""

    def __init__(self, message: str, *, row: int | None = None,
                 col: str | int | None = None, op: str | None = None):
        self.row = row
        self.col = col
        super().__init__(message, op=op)


class NonFiniteValue(VolqError):
    """Input data contains NaN or infinity."""

    def __init__(self, message: str, *, row: int | None = None,
                 op: str | None = None):
        self.row = row
        super().__init__(message, op=op)


class LengthMismatch(VolqError):
    """Two sequences that must align have different lengths."""
