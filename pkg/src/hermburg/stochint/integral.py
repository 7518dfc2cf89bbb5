"""
Discrete Stochastic Integrals

integrate_step sums a step function against the rectangular increments of
a sampled sheet. isometry_report compares the ensemble second moment of
that integral with the exact H norm of the integrand.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from hermburg.core.errors import GridMismatchError
from hermburg.core.jackknife import jackknife_mean_se
from hermburg.kernels.params import HermiteParams, require_valid
from hermburg.noise.grid import FieldKind, FieldSample, SeedSpec
from hermburg.noise.kernel_sampler import TruncationSpec
from hermburg.noise.sampling import SamplerKind, sample_sheet_ensemble
from hermburg.stochint.inner import h_norm_squared
from hermburg.stochint.step import StepFunction

logger = logging.getLogger(__name__)


def rectangular_increments(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Sheet mass of every cell from vertex values (iterated first differences)."""
    increments = np.asarray(values, dtype=float)
    for axis in range(increments.ndim):
        increments = np.diff(increments, axis=axis)
    return increments


def integrate_step(phi: StepFunction, sheet: FieldSample) -> float:
    """
    Riemann-Stieltjes sum of phi against the sheet.

    Args:
        phi: Integrand on sheet.grid
        sheet: A FieldSample of kind sheet

    Returns:
        sum over cells of phi times the rectangular increment of the sheet
    """
    if sheet.kind != FieldKind.SHEET:
        raise GridMismatchError(f"expected a sheet, got a {sheet.kind.value} field")
    phi.grid.require_same(sheet.grid)
    return float(np.sum(phi.coefficients * rectangular_increments(sheet.values)))


@dataclass
class IsometryReport:
    """Ensemble second moment of an integral against its H norm."""

    empirical_second_moment: float
    h_norm: float
    standard_error: float
    z_score: float
    n_samples: int

    @property
    def passed(self) -> bool:
        """Agreement within three standard errors."""
        return abs(self.z_score) < 3.0

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "empirical_second_moment": self.empirical_second_moment,
            "h_norm": self.h_norm,
            "standard_error": self.standard_error,
            "z_score": self.z_score,
            "n_samples": self.n_samples,
            "passed": self.passed,
        }


def z_score(estimate: float, target: float, se: float) -> float:
    """(estimate - target) / se with 0/0 read as agreement."""
    diff = estimate - target
    if se > 0:
        return diff / se
    return 0.0 if diff == 0 else math.copysign(math.inf, diff)


def isometry_report(
    phi: StepFunction,
    params: HermiteParams,
    n_samples: int,
    seed: SeedSpec,
    sampler: SamplerKind = SamplerKind.AUTO,
    trunc: TruncationSpec | None = None,
    m: int = 256,
    threads: int = 1,
    sheets: Sequence[FieldSample] | None = None,
) -> IsometryReport:
    """
    Check E[(int phi dZ)^2] = <phi, phi>_H on an ensemble of sheets.

    The second moment of the integral does not depend on q, so the same
    H norm is the target for every chaos order. A precomputed ensemble may
    be passed as sheets, in which case n_samples is ignored.
    """
    require_valid(params)
    if sheets is not None:
        n_samples = len(sheets)
    if n_samples < 2:
        raise ValueError("isometry_report needs at least 2 samples")
    target = h_norm_squared(phi, params.hurst).value

    if phi.is_zero:
        return IsometryReport(0.0, target, 0.0, 0.0, n_samples)

    if sheets is None:
        sheets = sample_sheet_ensemble(
            params, phi.grid, seed, n_samples, sampler=sampler, trunc=trunc, m=m, threads=threads
        )
    squares = np.array([integrate_step(phi, s) ** 2 for s in sheets])
    empirical = float(squares.mean())
    se = float(jackknife_mean_se(squares))
    z = z_score(empirical, target, se)
    logger.debug("isometry: empirical=%.6g target=%.6g z=%.3f", empirical, target, z)
    return IsometryReport(empirical, target, se, z, n_samples)
