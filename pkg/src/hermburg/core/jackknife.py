"""
Jackknife Standard Errors

Delete-one jackknife for means (closed form) and a grouped delete-a-group
jackknife for nonlinear statistics. Groups are contiguous index blocks so
results do not depend on how the ensemble was produced.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

DEFAULT_GROUPS = 20


def jackknife_mean_se(values: ArrayLike, axis: int = 0) -> NDArray[np.float64]:
    """
    Jackknife standard error of the sample mean along axis.

    For the mean the delete-one jackknife reduces exactly to std(ddof=1)/sqrt(n).
    """
    arr = np.asarray(values, dtype=float)
    n = arr.shape[axis]
    if n < 2:
        raise ValueError("jackknife needs at least 2 samples")
    return np.std(arr, axis=axis, ddof=1) / np.sqrt(n)


def jackknife(
    values: ArrayLike,
    statistic: Callable[[NDArray[np.float64]], ArrayLike],
    n_groups: int = DEFAULT_GROUPS,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Grouped jackknife estimate and standard error of statistic.

    Args:
        values: Samples along axis 0
        statistic: Maps a sample array (axis 0 = samples) to a scalar or array
        n_groups: Number of contiguous blocks deleted in turn (capped at n)

    Returns:
        (statistic on the full sample, jackknife standard error)
    """
    arr = np.asarray(values, dtype=float)
    n = arr.shape[0]
    if n < 2:
        raise ValueError("jackknife needs at least 2 samples")
    groups = min(n_groups, n)
    bounds = np.linspace(0, n, groups + 1).astype(int)

    full = np.asarray(statistic(arr), dtype=float)
    replicates = np.stack(
        [
            np.asarray(statistic(np.concatenate((arr[:lo], arr[hi:]))), dtype=float)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
    )
    mean_rep = replicates.mean(axis=0)
    se = np.sqrt((groups - 1) / groups * np.sum((replicates - mean_rep) ** 2, axis=0))
    return full, se
