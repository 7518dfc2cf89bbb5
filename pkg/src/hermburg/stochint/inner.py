"""
H Inner Product

<phi, psi>_H = alpha_H int int phi(s, y) psi(r, z) |s - r|^(2H_0 - 2)
                                  prod_i |y_i - z_i|^(2H_i - 2)

with alpha_H = prod_i H_i (2 H_i - 1). The weight factorizes over
coordinates, and for a pair of cells [a, b], [c, d] along one coordinate

    H(2H-1) int_a^b int_c^d |u - v|^(2H-2) = 1/2 (|b-c|^2H + |a-d|^2H
                                                 - |a-c|^2H - |b-d|^2H)

so step functions are integrated exactly, without quadrature on the
diagonal singularity.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from hermburg.core.errors import DomainError, GridMismatchError
from hermburg.noise.exact import apply_axis_factors
from hermburg.stochint.step import StepFunction


@dataclass
class HNormResult:
    """Value of an H inner product and a bound on its rounding error."""

    value: float
    quadrature_error_estimate: float

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "value": self.value,
            "quadrature_error_estimate": self.quadrature_error_estimate,
        }


@lru_cache(maxsize=64)
def cell_weight_matrix(h: float, step: float, count: int) -> NDArray[np.float64]:
    """Exact weighted integral over every pair of cells along one axis."""
    edges = np.arange(count + 1) * step
    a, b = edges[:-1, None], edges[1:, None]
    c, d = edges[None, :-1], edges[None, 1:]
    two_h = 2.0 * h
    matrix = 0.5 * (
        np.abs(b - c) ** two_h
        + np.abs(a - d) ** two_h
        - np.abs(a - c) ** two_h
        - np.abs(b - d) ** two_h
    )
    matrix.setflags(write=False)
    return matrix


def h_inner_product(
    phi: StepFunction, psi: StepFunction, hurst: Sequence[float]
) -> HNormResult:
    """
    Exact H inner product of two step functions on the same grid.

    Args:
        phi: First integrand
        psi: Second integrand
        hurst: Hurst vector (H_0, ..., H_d), every entry > 1/2

    Returns:
        HNormResult; value is >= 0 when phi and psi coincide
    """
    if phi.grid != psi.grid:
        raise GridMismatchError("step functions live on different grids")
    grid = phi.grid
    if len(hurst) != grid.d + 1:
        raise GridMismatchError(f"hurst has {len(hurst)} entries, grid has d={grid.d}")
    if any(not h > 0.5 for h in hurst):
        raise DomainError("the H inner product requires every H_i > 1/2")

    weights = [
        cell_weight_matrix(float(h), step, count)
        for h, step, count in zip(hurst, grid.axis_steps, grid.axis_counts)
    ]
    weighted = apply_axis_factors(weights, psi.coefficients)
    value = float(np.sum(phi.coefficients * weighted))

    magnitude = apply_axis_factors([np.abs(w) for w in weights], np.abs(psi.coefficients))
    scale = float(np.sum(np.abs(phi.coefficients) * magnitude))
    error = 4.0 * (grid.d + 1) * np.finfo(float).eps * scale

    if phi is psi or np.array_equal(phi.coefficients, psi.coefficients):
        value = max(value, 0.0)
    return HNormResult(value=value, quadrature_error_estimate=error)


def h_norm_squared(phi: StepFunction, hurst: Sequence[float]) -> HNormResult:
    """<phi, phi>_H."""
    return h_inner_product(phi, phi, hurst)
