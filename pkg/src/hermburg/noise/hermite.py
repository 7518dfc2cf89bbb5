"""Probabilists' Hermite polynomials He_q (He_1 = x, He_2 = x^2 - 1, ...)."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import eval_hermitenorm


def hermite_poly(q: int, x: ArrayLike) -> NDArray[np.float64] | float:
    """
    Evaluate He_q at x.

    Args:
        q: Degree, >= 1
        x: Scalar or array

    Returns:
        Polynomial value(s); a float for scalar input
    """
    if q < 1:
        raise ValueError(f"Hermite degree must be >= 1, got {q}")
    value = eval_hermitenorm(q, np.asarray(x, dtype=float))
    return float(value) if np.ndim(value) == 0 else value
