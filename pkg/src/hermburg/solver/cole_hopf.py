"""
Deterministic reference solution of viscous Burgers on the torus.

With c the mean of u0 and v0 = u0 - c, let W be a periodic antiderivative
of v0. Then phi = e^{t nu Lap} exp(-W / (2 nu)) solves the heat equation,
v = -2 nu phi_x / phi solves Burgers with v(0) = v0, and
u(t, x) = c + v(t, x - c t).
"""

from __future__ import annotations

import logging
import warnings

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hermburg.core.errors import DomainError, ResolutionWarning
from hermburg.solver.spectral import heat_symbol, wavenumbers

logger = logging.getLogger(__name__)

TRUNCATION_TOLERANCE = 1e-10


def cole_hopf_exact(
    u0: ArrayLike, t: float, nu: float, L: float, n_modes: int | None = None
) -> NDArray[np.float64]:
    """
    Exact solution at time t up to spectral truncation.

    Args:
        u0: Initial profile sampled at n_x equispaced nodes of [0, L)
        t: Time, >= 0
        nu: Viscosity, > 0
        L: Period
        n_modes: Retained Fourier modes of the transformed field (default n_x // 2)

    Returns:
        Profile at the same nodes

    Emits ResolutionWarning when the energy of the transformed field outside
    the lower half of the retained modes exceeds 1e-10 of the total.
    """
    if t < 0 or nu <= 0:
        raise DomainError(f"cole_hopf_exact needs t >= 0 and nu > 0, got t={t}, nu={nu}")
    profile = np.asarray(u0, dtype=float)
    n = profile.size
    n_modes = n // 2 if n_modes is None else min(n_modes, n // 2)
    k = wavenumbers(n, L)

    mean = float(profile.mean())
    v_hat = np.fft.rfft(profile - mean)
    w_hat = np.zeros_like(v_hat)
    w_hat[1:] = v_hat[1:] / (1j * k[1:])
    antiderivative = np.fft.irfft(w_hat, n=n)

    exponent = -antiderivative / (2.0 * nu)
    phi_hat = np.fft.rfft(np.exp(exponent - exponent.max()))
    phi_hat[n_modes + 1 :] = 0.0

    energy = np.abs(phi_hat) ** 2
    tail = float(energy[n_modes // 2 + 1 :].sum() / energy.sum())
    if tail > TRUNCATION_TOLERANCE:
        message = f"transformed field keeps {tail:.2e} of its energy in the upper modes"
        logger.warning(message)
        warnings.warn(message, ResolutionWarning, stacklevel=2)

    phi_hat = phi_hat * heat_symbol(n, L, nu, t)
    phi = np.fft.irfft(phi_hat, n=n)
    phi_x = np.fft.irfft(1j * k * phi_hat, n=n)
    v = -2.0 * nu * phi_x / phi

    shifted = np.fft.irfft(np.fft.rfft(v) * np.exp(-1j * k * mean * t), n=n)
    return mean + shifted
