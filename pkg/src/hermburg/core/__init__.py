"""
Core

Configuration, error types, the ensemble runner and run settings. Only the
error types are re-exported here; they are imported by every other
subpackage, so this module must not pull in the configuration models.
"""

from hermburg.core.errors import (
    ConfigParseError,
    DivergenceWarning,
    DomainError,
    GridMismatchError,
    HermburgError,
    InfeasibleSizeError,
    NonPositiveDefiniteError,
    ParameterError,
    ResolutionWarning,
    ResourceBudgetError,
    StabilityWarning,
    UnsupportedDimensionError,
)

__all__ = [
    "HermburgError",
    "ParameterError",
    "DomainError",
    "GridMismatchError",
    "UnsupportedDimensionError",
    "InfeasibleSizeError",
    "ResourceBudgetError",
    "NonPositiveDefiniteError",
    "ConfigParseError",
    "DivergenceWarning",
    "StabilityWarning",
    "ResolutionWarning",
]
