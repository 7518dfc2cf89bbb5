"""
Mild-Form Solvers

picard_solve iterates the whole space-time history until successive
iterates agree in sup norm. step_solve marches once, using the current
level inside the nonlinear and noise terms; its output is the fixed point
of the same discrete map, so both agree whenever Picard converges.
"""

from __future__ import annotations

import logging
import time
import warnings
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hermburg.core.ensemble import run_ensemble
from hermburg.core.errors import GridMismatchError, StabilityWarning, UnsupportedDimensionError
from hermburg.kernels.params import HermiteParams, require_valid
from hermburg.kernels.sigma import SigmaSpec
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec
from hermburg.noise.kernel_sampler import TruncationSpec
from hermburg.noise.sampling import SamplerKind, sample_sheet
from hermburg.solver.config import InitialGuess, SolverConfig, SolverScheme
from hermburg.solver.spectral import (
    heat_symbol,
    noise_increments,
    nonlinear_sources,
    stochastic_sources,
)

logger = logging.getLogger(__name__)

SIGN_CONVENTION = "mild-solution: -d/dx G * u^2/2"


@dataclass
class SolveResult:
    """A solution field with its iteration diagnostics."""

    field: FieldSample
    iter_distances: list[float]
    converged: bool
    scheme: SolverScheme
    config: SolverConfig
    wall_time: float = 0.0
    max_courant: float = 0.0
    sign_convention: str = SIGN_CONVENTION
    notes: list[str] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        """Number of Picard sweeps (1 for step_solve)."""
        return max(1, len(self.iter_distances))

    @property
    def contraction_ratios(self) -> list[float]:
        """Ratios of successive Picard distances."""
        d = self.iter_distances
        return [b / a if a > 0 else 0.0 for a, b in zip(d[:-1], d[1:])]

    def to_dict(self) -> dict:
        """Diagnostics for the JSON report (the field is written separately)."""
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "distances": list(self.iter_distances),
            "contraction_ratios": self.contraction_ratios,
            "scheme": self.scheme.value,
            "max_courant": self.max_courant,
            "sign_convention": self.sign_convention,
            "config": self.config.model_dump(mode="json"),
            "seed": self.field.seed.model_dump(mode="json"),
            "notes": list(self.notes),
        }


class _MildMap:
    """One discrete application of the mild form on a fixed grid and sheet."""

    def __init__(
        self,
        params: HermiteParams,
        sigma: SigmaSpec,
        u0: NDArray[np.float64],
        sheet: FieldSample | None,
        config: SolverConfig,
    ):
        self.grid: GridSpec = config.domain.grid()
        self.nu = params.nu
        self.sigma = sigma
        self.dealias = config.dealias
        self.u0 = u0
        self.decay = heat_symbol(self.grid.n_x, self.grid.L, self.nu, self.grid.dt)
        if sheet is None:
            self.d_z = None
        else:
            self.grid.require_same(sheet.grid)
            self.d_z = noise_increments(sheet)

    def sources(
        self, levels: NDArray[np.float64], first_level: int = 0
    ) -> NDArray[np.complex128]:
        """Combined Fourier increment of the nonlinear and noise terms per level."""
        grid = self.grid
        total = nonlinear_sources(levels, self.nu, grid.L, grid.dt, self.dealias)
        if self.d_z is not None and not self.sigma.is_zero:
            noise = stochastic_sources(self.sigma, levels, self.d_z, grid, first_level)
            total = total + self.decay * noise
        return total

    def heat_history(self) -> NDArray[np.float64]:
        """e^{t_k nu Lap} u0 at every level."""
        modes = np.fft.rfft(self.u0)
        powers = self.decay[None, :] ** np.arange(self.grid.n_t + 1)[:, None]
        return np.fft.irfft(modes[None, :] * powers, n=self.grid.n_x, axis=-1)

    def sweep(self, previous: NDArray[np.float64]) -> NDArray[np.float64]:
        """u_{n+1} from u_n over the whole history."""
        sources = self.sources(previous[:-1])
        return self._march(lambda k, _: sources[k])

    def march(self) -> NDArray[np.float64]:
        """Explicit march using the current level in every source term."""
        return self._march(lambda k, level: self.sources(level[None, :], k)[0])

    def _march(
        self, source_at: Callable[[int, NDArray[np.float64]], NDArray[np.complex128]]
    ) -> NDArray[np.float64]:
        grid = self.grid
        out = np.empty((grid.n_t + 1, grid.n_x))
        out[0] = self.u0
        modes = np.fft.rfft(self.u0)
        for k in range(grid.n_t):
            modes = self.decay * modes + source_at(k, out[k])
            out[k + 1] = np.fft.irfft(modes, n=grid.n_x)
        return out


def _prepare(
    params: HermiteParams,
    sigma: SigmaSpec,
    u0: ArrayLike,
    sheet: FieldSample | None,
    config: SolverConfig,
) -> _MildMap:
    require_valid(params)
    if params.d != 1:
        raise UnsupportedDimensionError(f"the solver is one-dimensional, got d={params.d}")
    profile = np.asarray(u0, dtype=float)
    if profile.shape != (config.domain.n_x,):
        raise GridMismatchError(
            f"initial profile has shape {profile.shape}, domain has n_x={config.domain.n_x}"
        )
    if sheet is None and not sigma.is_zero:
        raise ValueError("a driving sheet is required when sigma is not identically zero")
    if config.domain.wraps_heat_kernel(params.nu):
        logger.warning(
            "period L=%g is below 8 sqrt(nu t_max); heat kernel wrap-around is not negligible",
            config.domain.L,
        )
    return _MildMap(params, sigma, profile, sheet, config)


def _solution(
    values: NDArray[np.float64],
    grid: GridSpec,
    sheet: FieldSample | None,
    params: HermiteParams,
) -> FieldSample:
    return FieldSample(
        grid=grid,
        values=values,
        seed=sheet.seed if sheet is not None else SeedSpec(),
        kind=FieldKind.SOLUTION,
        params=params,
    )


def _max_courant(values: NDArray[np.float64], grid: GridSpec) -> float:
    return float(grid.dt * np.max(np.abs(values)) / grid.dx)


def picard_solve(
    params: HermiteParams,
    sigma: SigmaSpec,
    u0: ArrayLike,
    sheet: FieldSample | None,
    config: SolverConfig,
) -> SolveResult:
    """
    Solve the mild form by Picard iteration over the full history.

    Non-convergence is reported through SolveResult.converged, not raised.

    Args:
        params: Model parameters (d = 1)
        sigma: Noise coefficient
        u0: Initial profile at the n_x domain nodes
        sheet: Driving sheet on config.domain.grid(); may be None when sigma is 0
        config: Solver settings

    Returns:
        SolveResult with the last iterate
    """
    mild = _prepare(params, sigma, u0, sheet, config)
    start = time.perf_counter()
    if config.initial_guess == InitialGuess.HEAT:
        current = mild.heat_history()
    else:
        current = np.zeros(mild.grid.extent(FieldKind.SOLUTION))

    distances: list[float] = []
    converged = False
    notes: list[str] = []
    for iteration in range(1, config.max_iters + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            update = mild.sweep(current)
            distance = float(np.max(np.abs(update - current)))
        if not np.isfinite(distance):
            notes.append(f"iterate {iteration} is not finite")
            break
        distances.append(distance)
        current = update
        logger.debug("picard iteration %d: distance %.3e", iteration, distance)
        if distance <= config.picard_tol:
            converged = True
            break

    if not converged:
        logger.warning(
            "Picard iteration stopped after %d sweeps without reaching tol %.1e",
            len(distances),
            config.picard_tol,
        )
    else:
        logger.info("Picard converged in %d iterations", len(distances))

    return SolveResult(
        field=_solution(current, mild.grid, sheet, params),
        iter_distances=distances,
        converged=converged,
        scheme=SolverScheme.PICARD,
        config=config,
        wall_time=time.perf_counter() - start,
        max_courant=_max_courant(current, mild.grid) if np.all(np.isfinite(current)) else np.inf,
        notes=notes,
    )


def step_solve(
    params: HermiteParams,
    sigma: SigmaSpec,
    u0: ArrayLike,
    sheet: FieldSample | None,
    config: SolverConfig,
) -> SolveResult:
    """
    March the mild form level by level with explicit source terms.

    Emits StabilityWarning when dt max|u| / dx exceeds 1.
    """
    mild = _prepare(params, sigma, u0, sheet, config)
    start = time.perf_counter()
    with np.errstate(over="ignore", invalid="ignore"):
        values = mild.march()
    finite = bool(np.all(np.isfinite(values)))
    courant = _max_courant(values, mild.grid) if finite else np.inf
    notes: list[str] = []
    if courant > 1.0:
        message = f"Courant number dt max|u| / dx = {courant:.3g} exceeds 1"
        notes.append(message)
        logger.warning(message)
        warnings.warn(message, StabilityWarning, stacklevel=2)
    if not finite:
        notes.append("solution is not finite")
        values = np.nan_to_num(values, nan=0.0, posinf=0.0, neginf=0.0)

    return SolveResult(
        field=_solution(values, mild.grid, sheet, params),
        iter_distances=[],
        converged=finite,
        scheme=SolverScheme.STEP,
        config=config,
        wall_time=time.perf_counter() - start,
        max_courant=courant,
        notes=notes,
    )


def solve(
    params: HermiteParams,
    sigma: SigmaSpec,
    u0: ArrayLike,
    sheet: FieldSample | None,
    config: SolverConfig,
) -> SolveResult:
    """Dispatch on config.scheme."""
    if config.scheme == SolverScheme.STEP:
        return step_solve(params, sigma, u0, sheet, config)
    return picard_solve(params, sigma, u0, sheet, config)


def solve_ensemble(
    params: HermiteParams,
    sigma: SigmaSpec,
    u0: ArrayLike,
    config: SolverConfig,
    seed: SeedSpec,
    n: int,
    sampler: SamplerKind = SamplerKind.AUTO,
    trunc: TruncationSpec | None = None,
    m: int = 256,
    threads: int = 1,
    show_progress: bool = False,
) -> list[SolveResult]:
    """
    n solves, member i driven by the sheet drawn from seed.spawn(i).

    Member 0 runs first on the calling thread so that sampler calibration
    is cached before workers start.
    """
    grid = config.domain.grid()

    def member(i: int) -> SolveResult:
        sheet = sample_sheet(params, grid, seed.spawn(i), sampler, trunc, m)
        return solve(params, sigma, u0, sheet, config)

    if n < 1:
        return []
    first = member(0)
    rest = run_ensemble(
        lambda i: member(i + 1),
        n - 1,
        threads=threads,
        show_progress=show_progress,
        description="Solving...",
    )
    return [first, *rest]
