"""Piecewise-constant integrands on the space-time cells of a grid."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from hermburg.noise.grid import GridSpec


@dataclass
class StepFunction:
    """Value on every cell of grid; coefficients have shape grid.axis_counts."""

    grid: GridSpec
    coefficients: NDArray[np.float64]

    def __post_init__(self) -> None:
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if self.coefficients.shape != self.grid.axis_counts:
            raise ValueError(
                f"coefficients have shape {self.coefficients.shape}, "
                f"grid has cells {self.grid.axis_counts}"
            )
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("step function coefficients must be finite")

    @classmethod
    def zeros(cls, grid: GridSpec) -> StepFunction:
        """The zero function."""
        return cls(grid, np.zeros(grid.axis_counts))

    @classmethod
    def indicator(
        cls, grid: GridSpec, lower: Sequence[float], upper: Sequence[float]
    ) -> StepFunction:
        """
        Indicator of the box [lower, upper]; corners must be lattice points.

        Example:
            >>> StepFunction.indicator(grid, (0.0, 0.0), (1.0, 1.0))
        """
        lo = grid.lattice_index(lower)
        hi = grid.lattice_index(upper)
        if lo is None or hi is None:
            raise ValueError("indicator corners must be lattice points")
        coefficients = np.zeros(grid.axis_counts)
        coefficients[tuple(slice(a, b) for a, b in zip(lo, hi))] = 1.0
        return cls(grid, coefficients)

    def __add__(self, other: StepFunction) -> StepFunction:
        self.grid.require_same(other.grid)
        return StepFunction(self.grid, self.coefficients + other.coefficients)

    def __mul__(self, factor: float) -> StepFunction:
        return StepFunction(self.grid, self.coefficients * factor)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        """True when every coefficient vanishes."""
        return not np.any(self.coefficients)
