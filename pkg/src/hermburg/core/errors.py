"""
Exceptions and Warnings

Every failure raised by hermburg derives from HermburgError. The classes
also inherit from the matching builtin (ValueError, RuntimeError) so callers
that only know the builtins keep working.
"""

from __future__ import annotations


class HermburgError(Exception):
    """Base class for all hermburg errors."""


class ParameterError(HermburgError, ValueError):
    """Model parameters fail the admissibility gate."""


class DomainError(ParameterError):
    """An argument lies outside the domain of an operation."""


class GridMismatchError(HermburgError, ValueError):
    """Two objects that must share a grid do not."""


class UnsupportedDimensionError(HermburgError, ValueError):
    """The operation is only defined for a subset of spatial dimensions."""


class InfeasibleSizeError(HermburgError, RuntimeError):
    """The requested lattice exceeds the exact sampler's size limit."""


class ResourceBudgetError(HermburgError, RuntimeError):
    """The requested computation exceeds a documented cost budget."""


class NonPositiveDefiniteError(HermburgError, RuntimeError):
    """A covariance factorization failed; indicates a covariance bug."""


class ConfigParseError(HermburgError, ValueError):
    """An experiment file could not be parsed or has unknown keys."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DivergenceWarning(UserWarning):
    """A quantity is evaluated outside the regime where it is finite."""


class StabilityWarning(UserWarning):
    """A time step violates the explicit stability bound."""


class ResolutionWarning(UserWarning):
    """A spectral truncation discards more energy than tolerated."""
