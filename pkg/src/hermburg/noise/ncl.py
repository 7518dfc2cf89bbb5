"""
Noncentral-Limit Sampler

A stationary Gaussian sheet with separable fractional-Gaussian-noise
correlations is drawn on an inner lattice by circulant embedding. Each axis
uses the memory H' = 1 + (H - 1)/q so that after the rank-q transform
He_q the normalized partial sums converge to the Hermite sheet with Hurst
index H. Normalization is calibrated like the kernel sampler.
"""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray

from hermburg.core.errors import DomainError, GridMismatchError, ResourceBudgetError
from hermburg.kernels.params import HermiteParams, require_valid
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec
from hermburg.noise.hermite import hermite_poly
from hermburg.noise.kernel_sampler import calibrate

logger = logging.getLogger(__name__)

MIN_INNER_FACTOR = 32
MAX_EMBEDDING_POINTS = 2**24
NCL_CALIBRATION_BATCH = 2000


def gaussian_memory(h: float, q: int) -> float:
    """Hurst index of the underlying Gaussian so that He_q yields index h."""
    return 1.0 + (h - 1.0) / q


def fgn_autocovariance(h: float, lags: NDArray[np.int64]) -> NDArray[np.float64]:
    """Autocovariance of unit-variance fractional Gaussian noise."""
    k = np.abs(lags).astype(float)
    two_h = 2.0 * h
    return 0.5 * (np.abs(k + 1) ** two_h - 2.0 * k**two_h + np.abs(k - 1) ** two_h)


def circulant_eigenvalues(h: float, n: int) -> NDArray[np.float64]:
    """Eigenvalues of the minimal circulant embedding (size 2n) of fGn(h)."""
    gamma = fgn_autocovariance(h, np.arange(n + 1))
    row = np.concatenate((gamma, gamma[n - 1 : 0 : -1]))
    eig = np.fft.fft(row).real
    if eig.min() < -1e-8 * eig.max():
        logger.warning("circulant embedding of fGn(H=%.3g, n=%d) is not PSD", h, n)
    return np.clip(eig, 0.0, None)


class NclSheetSampler:
    """Unnormalized noncentral-limit construction for one (params, grid, m)."""

    def __init__(self, params: HermiteParams, grid: GridSpec, m: int):
        self.params = params
        self.grid = grid
        self.refine = tuple(max(1, round(m * step)) for step in grid.axis_steps)
        self.inner = tuple(n * r for n, r in zip(grid.axis_counts, self.refine))
        embedding = tuple(2 * n for n in self.inner)
        if math.prod(embedding) > MAX_EMBEDDING_POINTS:
            raise ResourceBudgetError(
                f"ncl embedding {embedding} exceeds {MAX_EMBEDDING_POINTS} points; lower m"
            )

        amplitude = np.ones(())
        for h, n in zip(params.hurst, self.inner):
            eig = circulant_eigenvalues(gaussian_memory(h, params.q), n)
            amplitude = np.multiply.outer(amplitude, eig)
        self._amplitude = np.sqrt(amplitude / amplitude.size)
        self._crop = tuple(slice(0, n) for n in self.inner)

    def draw(self, rng: np.random.Generator) -> NDArray[np.float64]:
        """Unnormalized vertex values of one sheet."""
        shape = self._amplitude.shape
        xi = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        gaussian = np.fft.fftn(self._amplitude * xi).real[self._crop]

        partial = hermite_poly(self.params.q, gaussian)
        for axis in range(partial.ndim):
            partial = np.cumsum(partial, axis=axis)

        values = np.zeros(self.grid.extent(FieldKind.SHEET))
        picks = tuple(slice(r - 1, None, r) for r in self.refine)
        values[(slice(1, None),) * partial.ndim] = partial[picks]
        return values


@lru_cache(maxsize=16)
def _ncl_sampler(params: HermiteParams, grid: GridSpec, m: int) -> tuple[NclSheetSampler, float]:
    sampler = NclSheetSampler(params, grid, m)
    scale = calibrate(sampler.draw, params, grid, NCL_CALIBRATION_BATCH, "ncl")
    return sampler, scale


def sample_hermite_sheet_ncl(
    params: HermiteParams, grid: GridSpec, m: int, seed: SeedSpec
) -> FieldSample:
    """
    Draw one Hermite sheet as a normalized partial sum of He_q(long-memory field).

    Args:
        params: Model parameters (must pass the admissibility gate)
        grid: Lattice of the returned sheet
        m: Inner lattice points per unit length along every axis, >= 32
        seed: Stream to draw from

    Returns:
        FieldSample of kind sheet
    """
    require_valid(params)
    if params.d != grid.d:
        raise GridMismatchError(f"params have d={params.d}, grid has d={grid.d}")
    if m < MIN_INNER_FACTOR:
        raise DomainError(f"inner lattice factor m must be >= {MIN_INNER_FACTOR}, got {m}")
    sampler, scale = _ncl_sampler(params, grid, m)
    values = scale * sampler.draw(seed.generator())
    return FieldSample(
        grid=grid, values=values, seed=seed, kind=FieldKind.SHEET, params=params
    )
