"""
Exact Fractional Brownian Sheet

The q = 1 sheet is Gaussian with a covariance that factorizes over the
coordinates, so its lattice covariance is a Kronecker product of per-axis
fBm covariance matrices. The Cholesky factor of the product is the product
of the per-axis factors, which keeps the exact sampler cheap: one small
factorization per axis and a mode-wise matrix product per sample.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from hermburg.core.errors import (
    GridMismatchError,
    InfeasibleSizeError,
    NonPositiveDefiniteError,
)
from hermburg.kernels.covariance import fbm_covariance
from hermburg.kernels.params import HermiteParams, require_valid
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec

logger = logging.getLogger(__name__)

# Documented lattice limits of the exact sampler
MAX_EXACT_AXIS = 4096
MAX_EXACT_POINTS = 2**22


@lru_cache(maxsize=64)
def _axis_factor(h: float, step: float, count: int) -> NDArray[np.float64]:
    """Lower Cholesky factor of the fBm covariance at step, 2 step, ..., count step."""
    nodes = step * np.arange(1, count + 1)
    cov = fbm_covariance(nodes[:, None], nodes[None, :], h)
    try:
        factor = linalg.cholesky(cov, lower=True)
    except linalg.LinAlgError as e:
        raise NonPositiveDefiniteError(
            f"fBm covariance (H={h}, {count} nodes) is not positive definite: {e}"
        )
    factor.setflags(write=False)
    return factor


def apply_axis_factors(
    factors: Sequence[NDArray[np.float64]], xi: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Multiply the Kronecker product of factors into xi, one axis at a time."""
    out = xi
    for axis, factor in enumerate(factors):
        out = np.moveaxis(np.tensordot(factor, out, axes=([1], [axis])), 0, axis)
    return out


def sample_fbm_sheet_exact(
    hurst: Sequence[float], grid: GridSpec, seed: SeedSpec
) -> FieldSample:
    """
    Draw the Gaussian (q = 1) sheet exactly on the lattice.

    Args:
        hurst: Hurst vector (H_0, ..., H_d)
        grid: Lattice; its d must match the Hurst vector
        seed: Stream to draw from

    Returns:
        FieldSample of kind sheet, zero on every axis

    Raises:
        DomainError: if the q = 1 parameter gate fails
        InfeasibleSizeError: above MAX_EXACT_AXIS or MAX_EXACT_POINTS
        NonPositiveDefiniteError: if a per-axis factorization fails
    """
    if len(hurst) != grid.d + 1:
        raise GridMismatchError(f"hurst has {len(hurst)} entries, grid has d={grid.d}")
    params = HermiteParams(q=1, hurst=tuple(hurst), d=grid.d)
    require_valid(params)

    counts = grid.axis_counts
    points = math.prod(counts)
    if max(counts) > MAX_EXACT_AXIS or points > MAX_EXACT_POINTS:
        raise InfeasibleSizeError(
            f"exact sampler limited to {MAX_EXACT_AXIS} nodes per axis and "
            f"{MAX_EXACT_POINTS} lattice points; requested {counts}. "
            "Use the kernel or ncl sampler for larger lattices."
        )

    factors = [
        _axis_factor(float(h), step, count)
        for h, step, count in zip(hurst, grid.axis_steps, counts)
    ]
    rng = seed.generator()
    interior = apply_axis_factors(factors, rng.standard_normal(counts))

    values = np.zeros(grid.extent(FieldKind.SHEET))
    values[(slice(1, None),) * (grid.d + 1)] = interior
    logger.debug("exact fBm sheet on %s", counts)
    return FieldSample(
        grid=grid, values=values, seed=seed, kind=FieldKind.SHEET, params=params
    )
