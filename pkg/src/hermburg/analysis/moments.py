"""
Moment Statistics

Per-point moments of an ensemble, exponential-envelope fits of moment
growth across horizons, excess kurtosis and the hypercontractivity bound
of chaos-q variables.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats as sps

from hermburg.core.jackknife import jackknife, jackknife_mean_se
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec
from hermburg.noise.sampling import stack_values

logger = logging.getLogger(__name__)

MIN_SE_SAMPLES = 100
CURVATURE_FLOOR = 1e-8


@dataclass
class EnsembleStats:
    """Per-point estimates of E|u|^p with standard errors."""

    grid: GridSpec
    kind: FieldKind
    n: int
    orders: list[float]
    estimates: dict[float, NDArray[np.float64]]
    standard_errors: dict[float, NDArray[np.float64]]

    def sup(self, p: float) -> tuple[float, float]:
        """sup over the grid of E|u|^p and the SE at the maximizing point."""
        est = self.estimates[p]
        index = np.unravel_index(int(np.argmax(est)), est.shape)
        return float(est[index]), float(self.standard_errors[p][index])

    def x_norm(self, p: float) -> float:
        """sup_{t,x} (E|u|^p)^(1/p)."""
        return self.sup(p)[0] ** (1.0 / p)

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "kind": self.kind.value,
            "n": self.n,
            "grid": self.grid.model_dump(),
            "orders": list(self.orders),
            "sup": {str(p): dict(zip(("value", "se"), self.sup(p))) for p in self.orders},
        }


def empirical_moments(ensemble: Sequence[FieldSample], p_list: Sequence[float]) -> EnsembleStats:
    """
    Sample moments E|u|^p at every lattice point.

    Args:
        ensemble: Fields on a common grid
        p_list: Moment orders, each > 0

    Returns:
        EnsembleStats; SEs are exactly 0 for a deterministic ensemble
    """
    values = stack_values(list(ensemble))
    n = values.shape[0]
    if n < 2:
        raise ValueError("empirical_moments needs at least 2 samples")
    if n < MIN_SE_SAMPLES:
        logger.warning("standard errors from %d samples are unreliable", n)
    if any(p <= 0 for p in p_list):
        raise ValueError("moment orders must be positive")

    estimates: dict[float, NDArray[np.float64]] = {}
    errors: dict[float, NDArray[np.float64]] = {}
    magnitude = np.abs(values)
    for p in p_list:
        powered = magnitude**p
        estimates[p] = powered.mean(axis=0)
        errors[p] = jackknife_mean_se(powered)
    return EnsembleStats(
        grid=ensemble[0].grid,
        kind=ensemble[0].kind,
        n=n,
        orders=list(p_list),
        estimates=estimates,
        standard_errors=errors,
    )


@dataclass
class MomentGrowthReport:
    """Exponential envelope C exp(lambda T) of sup moments across horizons."""

    p: float
    horizons: list[float]
    sup_moments: list[float]
    standard_errors: list[float]
    envelope_constant: float
    growth_rate: float
    curvature: float
    curvature_se: float
    super_exponential: bool
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Finite envelope and no super-exponential curvature."""
        return (
            not self.super_exponential
            and math.isfinite(self.envelope_constant)
            and math.isfinite(self.growth_rate)
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "p": self.p,
            "horizons": list(self.horizons),
            "sup_moments": list(self.sup_moments),
            "standard_errors": list(self.standard_errors),
            "envelope_constant": self.envelope_constant,
            "growth_rate": self.growth_rate,
            "curvature": self.curvature,
            "curvature_se": self.curvature_se,
            "super_exponential": self.super_exponential,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def moment_growth_check(stats: Sequence[EnsembleStats], p: float = 2.0) -> MomentGrowthReport:
    """
    Fit log sup E|u|^p against the horizon t_max.

    A weighted line gives the envelope C exp(lambda T); a weighted quadratic
    flags super-exponential growth when its curvature exceeds three standard
    errors (and a floor of 1e-8).

    Args:
        stats: One EnsembleStats per horizon
        p: Moment order present in every entry

    Returns:
        MomentGrowthReport
    """
    if len(stats) < 3:
        raise ValueError("need ≥ 3 horizons")
    ordered = sorted(stats, key=lambda s: s.grid.t_max)
    horizons = np.array([s.grid.t_max for s in ordered])
    if len(set(horizons.tolist())) < 3:
        raise ValueError("need ≥ 3 horizons")
    sups = [s.sup(p) for s in ordered]
    values = np.array([v for v, _ in sups])
    errors = np.array([e for _, e in sups])

    if not np.any(values > 0):
        return MomentGrowthReport(
            p=p,
            horizons=horizons.tolist(),
            sup_moments=values.tolist(),
            standard_errors=errors.tolist(),
            envelope_constant=0.0,
            growth_rate=0.0,
            curvature=0.0,
            curvature_se=0.0,
            super_exponential=False,
            notes=["all sup moments vanish"],
        )

    floor = values[values > 0].min()
    logs = np.log(np.maximum(values, floor))
    log_se = np.maximum(errors / np.maximum(values, floor), 1e-12)
    weights = 1.0 / log_se

    slope, intercept = np.polyfit(horizons, logs, 1, w=weights)
    coeffs, cov = np.polyfit(horizons, logs, 2, w=weights, cov="unscaled")
    curvature = float(coeffs[0])
    curvature_se = float(math.sqrt(max(cov[0, 0], 0.0)))
    flagged = curvature > 3.0 * curvature_se and curvature > CURVATURE_FLOOR
    logger.debug(
        "moment growth p=%g: rate=%.4g curvature=%.3g +- %.3g", p, slope, curvature, curvature_se
    )
    return MomentGrowthReport(
        p=p,
        horizons=horizons.tolist(),
        sup_moments=values.tolist(),
        standard_errors=errors.tolist(),
        envelope_constant=float(math.exp(intercept)),
        growth_rate=float(slope),
        curvature=curvature,
        curvature_se=curvature_se,
        super_exponential=bool(flagged),
    )


def excess_kurtosis(values: ArrayLike) -> tuple[float, float]:
    """Excess kurtosis of a sample and its grouped-jackknife SE (0 for Gaussians)."""
    sample = np.asarray(values, dtype=float).ravel()
    estimate, se = jackknife(sample, lambda x: sps.kurtosis(x, fisher=True, bias=False))
    return float(estimate), float(se)


@dataclass
class HypercontractivityReport:
    """||F||_p against (p - 1)^(q/2) ||F||_2 for each order p."""

    q: int
    orders: list[float]
    norms: list[float]
    bounds: list[float]
    standard_errors: list[float]

    @property
    def passed(self) -> bool:
        """Every norm within three SEs below its bound."""
        return all(
            n <= b + 3.0 * se for n, b, se in zip(self.norms, self.bounds, self.standard_errors)
        )

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "q": self.q,
            "orders": list(self.orders),
            "norms": list(self.norms),
            "bounds": list(self.bounds),
            "standard_errors": list(self.standard_errors),
            "passed": self.passed,
        }


def hypercontractivity_check(
    values: ArrayLike, q: int, p_list: Sequence[float] = (4.0, 6.0)
) -> HypercontractivityReport:
    """
    Check ||F||_p <= (p - 1)^(q/2) ||F||_2 for a sample of a chaos-q variable.
    """
    sample = np.asarray(values, dtype=float).ravel()
    l2 = float(np.sqrt(np.mean(sample**2)))
    norms, bounds, errors = [], [], []
    for p in p_list:
        if p < 2:
            raise ValueError("hypercontractivity orders must be >= 2")
        norm, se = jackknife(sample, lambda x, p=p: np.mean(np.abs(x) ** p) ** (1.0 / p))
        norms.append(float(norm))
        errors.append(float(se))
        bounds.append((p - 1.0) ** (q / 2.0) * l2)
    return HypercontractivityReport(q, list(p_list), norms, bounds, errors)
