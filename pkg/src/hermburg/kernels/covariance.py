"""Covariance of the Hermite sheet (identical for every chaos order q)."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray


def fbm_covariance(t: ArrayLike, s: ArrayLike, h: float) -> NDArray[np.float64]:
    """One-parameter factor 1/2 (t^2h + s^2h - |t - s|^2h), broadcast elementwise."""
    t_arr = np.asarray(t, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    two_h = 2.0 * h
    return 0.5 * (
        np.abs(t_arr) ** two_h + np.abs(s_arr) ** two_h - np.abs(t_arr - s_arr) ** two_h
    )


def sheet_covariance(
    t: ArrayLike, s: ArrayLike, hurst: Sequence[float]
) -> NDArray[np.float64] | float:
    """
    Product covariance E[Z_t Z_s] of the sheet.

    Args:
        t: Point(s) with trailing axis of length d + 1, coordinates >= 0
        s: Point(s) broadcastable against t
        hurst: Hurst vector (H_0, ..., H_d)

    Returns:
        Covariance value(s); a float for single points
    """
    t_arr = np.asarray(t, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    if t_arr.shape[-1] != len(hurst) or s_arr.shape[-1] != len(hurst):
        raise ValueError(f"points must have {len(hurst)} coordinates")
    if np.any(t_arr < 0) or np.any(s_arr < 0):
        raise ValueError("sheet coordinates must be non-negative")

    result = np.ones(np.broadcast_shapes(t_arr.shape[:-1], s_arr.shape[:-1]))
    for i, h in enumerate(hurst):
        result = result * fbm_covariance(t_arr[..., i], s_arr[..., i], h)
    return float(result) if result.ndim == 0 else result
