"""
Hölder Exponents from Increment Moments

E|u(z + h e) - u(z)|^p ~ C h^(alpha p) is regressed in log-log scale over
a set of lags, averaging over every base point of the lattice. Solution
fields are periodic in space, so spatial increments wrap around.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import stats as sps

from hermburg.core.jackknife import jackknife
from hermburg.kernels.params import HermiteParams
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec
from hermburg.noise.sampling import stack_values

logger = logging.getLogger(__name__)

DEFAULT_LAGS = (1, 2, 4, 8)
MIN_LAGS = 4


def parse_direction(direction: str, d: int) -> int:
    """Array axis of "time" or "space-i" (1 <= i <= d)."""
    if direction == "time":
        return 0
    if direction.startswith("space-"):
        try:
            axis = int(direction.removeprefix("space-"))
        except ValueError:
            axis = 0
        if 1 <= axis <= d:
            return axis
    raise ValueError(f"direction must be 'time' or 'space-i' with 1 <= i <= {d}, got {direction!r}")


def _max_lag(grid: GridSpec, kind: FieldKind, axis: int) -> int:
    count = grid.axis_counts[axis]
    if kind == FieldKind.SOLUTION and axis > 0:
        return count - 1
    return count


def increment_moments(
    values: NDArray[np.float64], axis: int, lags: Sequence[int], p: float, periodic: bool
) -> NDArray[np.float64]:
    """
    Per-sample mean over base points of |increment|^p, shape (n_samples, len(lags)).

    Axis counts from the field axes; values carry a leading sample axis.
    """
    field_axis = axis + 1
    out = np.empty((values.shape[0], len(lags)))
    for j, lag in enumerate(lags):
        if periodic:
            diff = np.roll(values, -lag, axis=field_axis) - values
        else:
            n = values.shape[field_axis]
            diff = np.take(values, np.arange(lag, n), axis=field_axis) - np.take(
                values, np.arange(0, n - lag), axis=field_axis
            )
        out[:, j] = np.mean(np.abs(diff) ** p, axis=tuple(range(1, diff.ndim)))
    return out


@dataclass
class HolderFit:
    """Log-log regression of increment moments against the lag."""

    direction: str
    p: float
    lags: list[int]
    steps: list[float]
    moments: list[float]
    slope: float
    intercept: float
    r_squared: float
    exponent: float
    standard_error: float
    degenerate: bool
    n: int

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "direction": self.direction,
            "p": self.p,
            "lags": list(self.lags),
            "steps": list(self.steps),
            "moments": list(self.moments),
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "exponent": self.exponent,
            "standard_error": self.standard_error,
            "degenerate": self.degenerate,
            "n": self.n,
        }


def _slope(moments: NDArray[np.float64], log_steps: NDArray[np.float64]) -> float:
    return float(np.polyfit(log_steps, np.log(moments), 1)[0])


def estimate_holder(
    ensemble: Sequence[FieldSample],
    direction: str = "time",
    p: float = 2.0,
    lags: Sequence[int] = DEFAULT_LAGS,
) -> HolderFit:
    """
    Estimate the Hölder exponent of an ensemble along one direction.

    Args:
        ensemble: Sheets or solutions on a common grid
        direction: "time" or "space-i"
        p: Moment order, > 0
        lags: At least four distinct lattice lags

    Returns:
        HolderFit with exponent = slope / p and a grouped-jackknife SE;
        an ensemble without increments yields a degenerate fit
    """
    values = stack_values(list(ensemble))
    grid, kind = ensemble[0].grid, ensemble[0].kind
    if kind == FieldKind.WHITE_NOISE:
        raise ValueError("Hölder exponents are defined for sheets and solutions")
    axis = parse_direction(direction, grid.d)
    lag_list = sorted({int(lag) for lag in lags})
    if len(lag_list) < MIN_LAGS:
        raise ValueError(f"need at least {MIN_LAGS} distinct lags, got {lag_list}")
    limit = _max_lag(grid, kind, axis)
    if lag_list[0] < 1 or lag_list[-1] > limit:
        raise ValueError(f"lags must lie in [1, {limit}] along {direction}")
    if p <= 0:
        raise ValueError("moment order must be positive")

    periodic = kind == FieldKind.SOLUTION and axis > 0
    per_sample = increment_moments(values, axis, lag_list, p, periodic)
    moments = per_sample.mean(axis=0)
    steps = np.array(lag_list, dtype=float) * grid.axis_steps[axis]
    log_steps = np.log(steps)

    if not np.all(moments > 0):
        logger.warning("degenerate Hölder regression along %s: vanishing increments", direction)
        return HolderFit(
            direction=direction,
            p=p,
            lags=lag_list,
            steps=steps.tolist(),
            moments=moments.tolist(),
            slope=0.0,
            intercept=0.0,
            r_squared=0.0,
            exponent=0.0,
            standard_error=0.0,
            degenerate=True,
            n=values.shape[0],
        )

    regression = sps.linregress(log_steps, np.log(moments))
    if values.shape[0] >= 2:
        _, slope_se = jackknife(
            per_sample, lambda block: _slope(np.maximum(block.mean(axis=0), 1e-300), log_steps)
        )
        se = float(slope_se) / p
    else:
        se = 0.0
    return HolderFit(
        direction=direction,
        p=p,
        lags=lag_list,
        steps=steps.tolist(),
        moments=moments.tolist(),
        slope=float(regression.slope),
        intercept=float(regression.intercept),
        r_squared=float(regression.rvalue**2),
        exponent=float(regression.slope) / p,
        standard_error=se,
        degenerate=False,
        n=values.shape[0],
    )


@dataclass
class HolderCheck:
    """Measured exponent against the guaranteed regularity."""

    direction: str
    exponent: float
    standard_error: float
    bound: float
    degenerate: bool

    @property
    def passed(self) -> bool:
        """exponent >= bound - 2 SE; degenerate (constant) fields pass."""
        return self.degenerate or self.exponent >= self.bound - 2.0 * self.standard_error

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "direction": self.direction,
            "exponent": self.exponent,
            "standard_error": self.standard_error,
            "bound": self.bound,
            "degenerate": self.degenerate,
            "passed": self.passed,
        }


def holder_bound(params: HermiteParams, direction: str) -> float:
    """min(H_0 - 1/2, 1/2) in time, min_i (H_i - 1/2) in space."""
    if parse_direction(direction, params.d) == 0:
        return min(params.h0 - 0.5, 0.5)
    return min(h - 0.5 for h in params.spatial_hurst)


def holder_bound_check(fit: HolderFit, params: HermiteParams) -> HolderCheck:
    """One-sided check that a fitted exponent is no rougher than guaranteed."""
    return HolderCheck(
        direction=fit.direction,
        exponent=fit.exponent,
        standard_error=fit.standard_error,
        bound=holder_bound(params, fit.direction),
        degenerate=fit.degenerate,
    )
