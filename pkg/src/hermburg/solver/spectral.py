"""
Spectral Building Blocks of the Mild Form

On the torus [0, L) the heat semigroup is diagonal in Fourier space:
mode k decays by exp(-nu k^2 dt) with k = 2 pi j / L. Every term of

    u(t) = e^{t nu Lap} u0 - int_0^t d/dx e^{(t-s) nu Lap} u(s)^2/2 ds
                           + int_0^t e^{(t-s) nu Lap} sigma(u(s)) dZ(s)

is advanced by one recursion per time level:

    N_{k+1} = E N_k + phi0 (-i k) FFT(u_k^2 / 2)
    S_{k+1} = E (S_k + FFT(sigma(u_k) dZ_k / dx))

with E = exp(-nu k^2 dt) and phi0 = (1 - E) / (nu k^2) the exact integral
of the semigroup over one left-endpoint panel. The stochastic integrand is
frozen at the left end of each step.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hermburg.core.errors import DomainError, GridMismatchError, UnsupportedDimensionError
from hermburg.kernels.sigma import SigmaSpec
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec
from hermburg.stochint.integral import rectangular_increments
from hermburg.stochint.step import StepFunction


def wavenumbers(n: int, L: float) -> NDArray[np.float64]:
    """Angular wavenumbers of the real FFT of n samples on [0, L)."""
    return 2.0 * np.pi * np.fft.rfftfreq(n, d=L / n)


def heat_symbol(n: int, L: float, nu: float, dt: float) -> NDArray[np.float64]:
    """exp(-nu k^2 dt) per rfft mode."""
    k = wavenumbers(n, L)
    return np.exp(-nu * k**2 * dt)


def panel_weight(n: int, L: float, nu: float, dt: float) -> NDArray[np.float64]:
    """int_0^dt exp(-nu k^2 s) ds per rfft mode."""
    rate = nu * wavenumbers(n, L) ** 2
    weight = np.full(rate.shape, dt)
    nonzero = rate > 0
    weight[nonzero] = -np.expm1(-rate[nonzero] * dt) / rate[nonzero]
    return weight


def dealias_mask(n: int) -> NDArray[np.bool_]:
    """True for modes kept by the 2/3 rule."""
    return np.arange(n // 2 + 1) <= n / 3.0


def heat_semigroup_apply(u: ArrayLike, dt: float, nu: float, L: float) -> NDArray[np.float64]:
    """
    Periodic heat semigroup e^{dt nu Lap} applied along the last axis.

    Args:
        u: Periodic profile(s) sampled at n_x nodes
        dt: Elapsed time, >= 0
        nu: Viscosity
        L: Period

    Returns:
        Profile(s) of the same shape
    """
    if dt < 0:
        raise DomainError(f"heat semigroup needs dt >= 0, got {dt}")
    profile = np.asarray(u, dtype=float)
    if dt == 0:
        return profile.copy()
    n = profile.shape[-1]
    modes = np.fft.rfft(profile, axis=-1) * heat_symbol(n, L, nu, dt)
    return np.fft.irfft(modes, n=n, axis=-1)


def _require_history(u_history: ArrayLike, t_index: int) -> NDArray[np.float64]:
    history = np.asarray(u_history, dtype=float)
    if history.ndim != 2:
        raise UnsupportedDimensionError(
            f"the solver is one-dimensional; history has shape {history.shape}"
        )
    if not 0 <= t_index <= history.shape[0]:
        raise ValueError(f"t_index {t_index} outside history of {history.shape[0]} levels")
    return history


def nonlinear_sources(
    u_levels: NDArray[np.float64], nu: float, L: float, dt: float, dealias: bool = False
) -> NDArray[np.complex128]:
    """Fourier increments phi0 (-i k) FFT(u^2/2) of every given level."""
    n = u_levels.shape[-1]
    k = wavenumbers(n, L)
    flux = np.fft.rfft(0.5 * u_levels**2, axis=-1)
    if dealias:
        flux = flux * dealias_mask(n)
    return panel_weight(n, L, nu, dt) * (-1j * k) * flux


def noise_increments(sheet: FieldSample) -> NDArray[np.float64]:
    """Space-time cell increments dZ of a 1-D sheet, shape (n_t, n_x)."""
    if sheet.kind != FieldKind.SHEET:
        raise GridMismatchError(f"expected a sheet, got a {sheet.kind.value} field")
    if sheet.grid.d != 1:
        raise UnsupportedDimensionError("the solver is one-dimensional")
    return rectangular_increments(sheet.values)


def stochastic_sources(
    sigma: SigmaSpec,
    u_levels: NDArray[np.float64],
    d_z: NDArray[np.float64],
    grid: GridSpec,
    first_level: int = 0,
) -> NDArray[np.complex128]:
    """FFT(sigma(t_j, x, u_j) dZ_j / dx) of the given levels, starting at first_level."""
    levels = slice(first_level, first_level + u_levels.shape[0])
    t = grid.times()[levels, None]
    x = grid.space(periodic=True)[None, :]
    density = sigma.evaluate(t, x, u_levels) * d_z[levels] / grid.dx
    return np.fft.rfft(density, axis=-1)


def nonlinear_increment(
    u_history: ArrayLike,
    t_index: int,
    nu: float,
    L: float,
    dt: float,
    dealias: bool = False,
) -> NDArray[np.float64]:
    """
    -int_0^{t_k} d/dx e^{(t_k - s) nu Lap} u(s)^2/2 ds with u frozen on each panel.

    Args:
        u_history: Profiles at time levels 0, 1, ... (at least t_index of them)
        t_index: Level k at which the history integral is evaluated
        nu: Viscosity
        L: Period
        dt: Time step
        dealias: Apply the 2/3 rule to u^2/2

    Returns:
        Profile with zero spatial mean
    """
    history = _require_history(u_history, t_index)
    n = history.shape[1]
    decay = heat_symbol(n, L, nu, dt)
    sources = nonlinear_sources(history[:t_index], nu, L, dt, dealias)
    acc = np.zeros(n // 2 + 1, dtype=complex)
    for source in sources:
        acc = decay * acc + source
    return np.fft.irfft(acc, n=n)


def stochastic_increment(
    sigma: SigmaSpec,
    u_history: ArrayLike,
    sheet: FieldSample,
    t_index: int,
    nu: float,
) -> NDArray[np.float64]:
    """
    Stochastic convolution at level t_index with sigma(u) frozen per step.

    Returns:
        Profile of length n_x; zero when sigma vanishes
    """
    history = _require_history(u_history, t_index)
    grid = sheet.grid
    d_z = noise_increments(sheet)
    if history.shape[1] != grid.n_x or t_index > grid.n_t:
        raise GridMismatchError(
            f"history of shape {history.shape} does not fit grid n_t={grid.n_t}, n_x={grid.n_x}"
        )
    decay = heat_symbol(grid.n_x, grid.L, nu, grid.dt)
    sources = stochastic_sources(sigma, history[:t_index], d_z, grid)
    acc = np.zeros(grid.n_x // 2 + 1, dtype=complex)
    for source in sources:
        acc = decay * (acc + source)
    return np.fft.irfft(acc, n=grid.n_x)


def frozen_kernel(grid: GridSpec, nu: float, t_index: int, x_index: int) -> StepFunction:
    """
    Integrand whose integral against a sheet is the stochastic increment
    at (t_index, x_index) for sigma = 1.

    Cell (j, l) carries [e^{(t_k - t_j) nu Lap} delta_l](x_i) / dx for j < k.
    """
    if grid.d != 1:
        raise UnsupportedDimensionError("the solver is one-dimensional")
    if not 0 <= t_index <= grid.n_t or not 0 <= x_index < grid.n_x:
        raise ValueError(f"({t_index}, {x_index}) is not a solution node")
    delta = np.zeros(grid.n_x)
    delta[x_index] = 1.0
    lags = (t_index - np.arange(t_index))[:, None] * grid.dt
    rate = nu * wavenumbers(grid.n_x, grid.L) ** 2
    rows = np.fft.irfft(np.fft.rfft(delta) * np.exp(-rate * lags), n=grid.n_x, axis=-1)
    coefficients = np.zeros(grid.axis_counts)
    coefficients[:t_index] = rows / grid.dx
    return StepFunction(grid, coefficients)
