"""
Heat Kernel

G_t(x) = (4 pi nu t)^(-d/2) exp(-|x|^2 / (4 nu t)) and its spatial gradient.
Points are passed either as scalars / arbitrary arrays (d = 1, evaluated
elementwise) or as arrays whose last axis has length d.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from hermburg.core.errors import DomainError


def _check_time(t: float, nu: float) -> None:
    if not t > 0:
        raise DomainError(f"heat kernel requires t > 0, got {t}")
    if not nu > 0:
        raise DomainError(f"heat kernel requires nu > 0, got {nu}")


def _squared_norm(x: NDArray[np.float64], d: int) -> NDArray[np.float64]:
    if d == 1:
        return x * x
    if x.shape[-1] != d:
        raise DomainError(f"points must have a trailing axis of length {d}")
    return np.sum(x * x, axis=-1)


def heat_kernel(t: float, x: ArrayLike, nu: float, d: int = 1) -> NDArray[np.float64] | float:
    """
    Evaluate the heat kernel at time t.

    Args:
        t: Time, strictly positive
        x: Point(s); scalar or array for d = 1, trailing axis of length d otherwise
        nu: Viscosity
        d: Spatial dimension

    Returns:
        Kernel value(s); a float for scalar input
    """
    _check_time(t, nu)
    arr = np.asarray(x, dtype=float)
    r2 = _squared_norm(arr, d)
    value = (4.0 * np.pi * nu * t) ** (-d / 2.0) * np.exp(-r2 / (4.0 * nu * t))
    return float(value) if np.ndim(value) == 0 else value


def heat_kernel_gradient(
    t: float, x: ArrayLike, nu: float, d: int = 1
) -> NDArray[np.float64] | float:
    """
    Spatial gradient of the heat kernel, -x / (2 nu t) * G_t(x).

    For d = 1 the result has the shape of x; otherwise it has the shape of x
    with the trailing axis holding the d gradient components.
    """
    _check_time(t, nu)
    arr = np.asarray(x, dtype=float)
    g = np.asarray(heat_kernel(t, arr, nu, d))
    if d == 1:
        grad = -arr / (2.0 * nu * t) * g
    else:
        grad = -arr / (2.0 * nu * t) * g[..., np.newaxis]
    return float(grad) if np.ndim(grad) == 0 else grad
