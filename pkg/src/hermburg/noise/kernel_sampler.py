"""
Kernel Sampler for Hermite Sheets

Discretizes the multiple Wiener integral that defines the sheet of order q:

    Z_t = c * I_q( prod_i int_0^{t_i} prod_j (s_i - y_{j,i})_+^{-beta_i} ds_i )

The inner s-integral is a midpoint Riemann sum on `refine` sub-cells per
grid cell. The y-lattice is uniform on [0, extent] with the same width and
grows geometrically on [-R, 0]. Kernel values are cell averages computed
from the closed antiderivative of (s - y)_+^{-beta}, so the singular point
never enters a sum.

For a fixed s-multi-index a the q-fold sum over pairwise distinct cells of
prod_j K_a(c_j) W(c_j) is q! e_q(v), the elementary symmetric polynomial of
v_c = K_a(c) W(c). Newton's identities express e_q through power sums
p_k = sum_c K_a(c)^k W(c)^k, and each p_k is a mode-wise product of the
noise tensor with the per-axis kernel matrices.

The constant c is calibrated on a fixed calibration stream so that the
variance at (1, ..., 1) equals 1.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field
from scipy import special

from hermburg.core.errors import GridMismatchError, ResourceBudgetError
from hermburg.kernels.params import HermiteParams, kernel_exponent, require_valid
from hermburg.noise.exact import apply_axis_factors
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec

logger = logging.getLogger(__name__)

MAX_KERNEL_ORDER = 3
MAX_KERNEL_COST = 1e9
"""Estimated floating point operations allowed per sample."""

CALIBRATION_SEED = SeedSpec(master_seed=0x48424631, stream_index=0)


class TruncationSpec(BaseModel):
    """Resolution and truncation of the kernel sampler's lattices."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    refine: int = Field(default=4, ge=1, le=64, description="Sub-cells per grid cell")
    tail_tol: float = Field(
        default=1e-3, gt=0.0, lt=1.0, description="Neglected relative L2 kernel mass"
    )
    growth: float = Field(
        default=1.5, gt=1.0, le=4.0, description="Width ratio of successive past cells"
    )
    max_tail_extent: float = Field(
        default=1e12, gt=1.0, description="Cap on R in units of the axis extent"
    )
    calibration_batch: int = Field(default=2000, ge=100)


def tail_extent(h: float, q: int, extent: float, tol: float) -> float:
    """
    Past truncation R so that kernel mass below -R is at most tol of the total.

    Uses the bound int_{-inf}^{-R} (s-y)^-b (s'-y)^-b dy <= R^(1-2b) / (2b-1)
    on one of the q factors and the Beta-function identity for the others.
    """
    beta = kernel_exponent(h, q)
    e = 1.0 - 2.0 * beta

    def _double_integral(g: float) -> float:
        # int int_[0,1]^2 |s - s'|^g ds ds'
        return 2.0 / ((g + 1.0) * (g + 2.0))

    b = special.beta(1.0 - beta, 2.0 * beta - 1.0)
    coeff = q / ((2.0 * beta - 1.0) * b) * _double_integral(e * (q - 1)) / _double_integral(e * q)
    if coeff <= tol:
        return extent
    return max(extent, extent * (tol / coeff) ** (1.0 / e))


def _cell_average_kernel(
    s: NDArray[np.float64], lo: NDArray[np.float64], hi: NDArray[np.float64], beta: float
) -> NDArray[np.float64]:
    """Average of (s - y)_+^-beta over y in [lo, hi], for all (s, cell) pairs."""
    s_col = s[:, None]
    expo = 1.0 - beta
    upper = np.clip(s_col - lo[None, :], 0.0, None) ** expo
    lower = np.clip(s_col - hi[None, :], 0.0, None) ** expo
    return (upper - lower) / (expo * (hi - lo)[None, :])


@dataclass(frozen=True)
class AxisLattice:
    """Inner s-nodes and y-cells along one coordinate."""

    kernel: NDArray[np.float64]
    """Cell-averaged kernel, shape (n_sub, n_cells)."""

    volumes: NDArray[np.float64]
    """Width of each y-cell."""

    sub_width: float
    refine: int
    tail: float
    """Past truncation R."""


def build_axis(
    h: float, q: int, extent: float, count: int, trunc: TruncationSpec
) -> AxisLattice:
    """Discretize one coordinate of the kernel."""
    beta = kernel_exponent(h, q)
    n_sub = count * trunc.refine
    width = extent / n_sub
    s_nodes = (np.arange(n_sub) + 0.5) * width

    tail = tail_extent(h, q, extent, trunc.tail_tol)
    cap = trunc.max_tail_extent * extent
    if tail > cap:
        logger.warning(
            "past truncation %.3g for H=%.3g, q=%d capped at %.3g; tail tolerance not met",
            tail,
            h,
            q,
            cap,
        )
        tail = cap

    n_past = math.ceil(math.log1p(tail * (trunc.growth - 1.0) / width) / math.log(trunc.growth))
    past_widths = width * trunc.growth ** np.arange(n_past)
    past_edges = -np.concatenate(([0.0], np.cumsum(past_widths)))[::-1]
    edges = np.concatenate((past_edges, np.arange(1, n_sub + 1) * width))

    lo, hi = edges[:-1], edges[1:]
    kernel = _cell_average_kernel(s_nodes, lo, hi, beta)
    return AxisLattice(
        kernel=kernel, volumes=hi - lo, sub_width=width, refine=trunc.refine, tail=tail
    )


class KernelSheetSampler:
    """
    Unnormalized kernel construction for one (params, grid, trunc) triple.

    Example:
        >>> sampler = KernelSheetSampler(params, grid, TruncationSpec())
        >>> raw = sampler.draw(seed.generator())
    """

    def __init__(self, params: HermiteParams, grid: GridSpec, trunc: TruncationSpec):
        self.params = params
        self.grid = grid
        self.trunc = trunc
        self.axes = [
            build_axis(h, params.q, extent, count, trunc)
            for h, extent, count in zip(params.hurst, grid.axis_extents, grid.axis_counts)
        ]
        self.noise_shape = tuple(len(a.volumes) for a in self.axes)
        self._noise_scale = self._outer_sqrt_volumes()
        self._powered = [
            [a.kernel**k for a in self.axes] for k in range(1, params.q + 1)
        ]
        self._sub_volume = math.prod(a.sub_width for a in self.axes)

    def _outer_sqrt_volumes(self) -> NDArray[np.float64]:
        scale = np.ones(())
        for axis in self.axes:
            scale = np.multiply.outer(scale, np.sqrt(axis.volumes))
        return scale

    @property
    def cost(self) -> float:
        """Estimated floating point operations per sample."""
        cells = math.prod(self.noise_shape)
        n_sub = max(a.kernel.shape[0] for a in self.axes)
        return 2.0 * self.params.q * len(self.axes) * n_sub * cells

    def draw(self, rng: np.random.Generator) -> NDArray[np.float64]:
        """Unnormalized vertex values of one sheet."""
        q = self.params.q
        w = rng.standard_normal(self.noise_shape) * self._noise_scale

        power_sums = [apply_axis_factors(self._powered[k], w ** (k + 1)) for k in range(q)]
        # Newton's identities: k e_k = sum_i (-1)^(i-1) e_{k-i} p_i
        elementary = [np.ones_like(power_sums[0])]
        for k in range(1, q + 1):
            acc = np.zeros_like(power_sums[0])
            for i in range(1, k + 1):
                acc += (-1) ** (i - 1) * elementary[k - i] * power_sums[i - 1]
            elementary.append(acc / k)
        density = math.factorial(q) * elementary[q] * self._sub_volume

        for axis in range(density.ndim):
            density = np.cumsum(density, axis=axis)

        values = np.zeros(self.grid.extent(FieldKind.SHEET))
        picks = tuple(slice(a.refine - 1, None, a.refine) for a in self.axes)
        values[(slice(1, None),) * len(self.axes)] = density[picks]
        return values


def calibration_point(params: HermiteParams, grid: GridSpec) -> tuple[tuple[int, ...], float]:
    """
    Lattice index used for calibration and the target standard deviation there.

    The unit point (1, ..., 1) is used when it lies on the lattice, otherwise
    the far corner with its closed-form standard deviation prod T_i^H_i.
    """
    unit = grid.lattice_index((1.0,) * (grid.d + 1))
    if unit is not None and all(k > 0 for k in unit):
        return unit, 1.0
    corner = grid.axis_counts
    target = math.prod(t**h for t, h in zip(grid.axis_extents, params.hurst))
    return corner, target


def calibrate(
    draw: Callable[[np.random.Generator], NDArray[np.float64]],
    params: HermiteParams,
    grid: GridSpec,
    batch: int,
    label: str,
) -> float:
    """Scale making the calibration stream's std at the calibration point match its target."""
    index, target = calibration_point(params, grid)
    rng = CALIBRATION_SEED.spawn(params.q).generator()
    raw = np.array([draw(rng)[index] for _ in range(batch)])
    spread = float(np.std(raw, ddof=1))
    if not spread > 0:
        raise ResourceBudgetError("calibration batch has zero spread; refine the lattice")
    logger.info(
        "calibrated %s sampler at %s: raw std %.4g -> scale %.4g",
        label,
        index,
        spread,
        target / spread,
    )
    return target / spread


@lru_cache(maxsize=16)
def _kernel_sampler(
    params: HermiteParams, grid: GridSpec, trunc: TruncationSpec
) -> tuple[KernelSheetSampler, float]:
    sampler = KernelSheetSampler(params, grid, trunc)
    if sampler.cost > MAX_KERNEL_COST:
        raise ResourceBudgetError(
            f"kernel sampler needs ~{sampler.cost:.3g} flops per sample "
            f"(budget {MAX_KERNEL_COST:.3g}); reduce refine, n_t/n_x or tail_tol"
        )
    scale = calibrate(sampler.draw, params, grid, trunc.calibration_batch, "kernel")
    return sampler, scale


def sample_hermite_sheet_kernel(
    params: HermiteParams, grid: GridSpec, trunc: TruncationSpec, seed: SeedSpec
) -> FieldSample:
    """
    Draw one Hermite sheet of order q by the kernel construction.

    Args:
        params: Model parameters (must pass the admissibility gate)
        grid: Lattice of the returned sheet
        trunc: Resolution and truncation of the inner lattices
        seed: Stream to draw from

    Returns:
        FieldSample of kind sheet

    Raises:
        ResourceBudgetError: if q > MAX_KERNEL_ORDER or the cost budget is exceeded
    """
    require_valid(params)
    if params.d != grid.d:
        raise GridMismatchError(f"params have d={params.d}, grid has d={grid.d}")
    if params.q > MAX_KERNEL_ORDER:
        raise ResourceBudgetError(
            f"kernel sampler supports q <= {MAX_KERNEL_ORDER}, got q={params.q}"
        )
    sampler, scale = _kernel_sampler(params, grid, trunc)
    values = scale * sampler.draw(seed.generator())
    return FieldSample(
        grid=grid, values=values, seed=seed, kind=FieldKind.SHEET, params=params
    )
