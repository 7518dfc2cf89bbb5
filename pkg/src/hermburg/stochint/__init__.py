"""
Stochastic Integration

Step-function integrands, the exact H inner product, discrete integrals
against sampled sheets and the stochastic convolution integral I(t).
"""

from hermburg.stochint.capital_i import CapitalIResult, QuadratureSpec, capital_I
from hermburg.stochint.inner import HNormResult, h_inner_product, h_norm_squared
from hermburg.stochint.integral import (
    IsometryReport,
    integrate_step,
    isometry_report,
    rectangular_increments,
)
from hermburg.stochint.step import StepFunction

__all__ = [
    "StepFunction",
    "HNormResult",
    "h_inner_product",
    "h_norm_squared",
    "integrate_step",
    "rectangular_increments",
    "IsometryReport",
    "isometry_report",
    "QuadratureSpec",
    "CapitalIResult",
    "capital_I",
]
