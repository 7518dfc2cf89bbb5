"""Gaussian white noise on the space-time cells of a grid."""

from __future__ import annotations

import logging

import numpy as np

from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec

logger = logging.getLogger(__name__)


def sample_white_noise(grid: GridSpec, seed: SeedSpec) -> FieldSample:
    """
    Independent centered Gaussian increments, variance equal to the cell volume.

    Args:
        grid: Lattice whose cells receive one increment each
        seed: Stream to draw from

    Returns:
        FieldSample of kind white-noise
    """
    rng = seed.generator()
    scale = np.sqrt(grid.cell_volume)
    values = rng.standard_normal(grid.extent(FieldKind.WHITE_NOISE)) * scale
    logger.debug("white noise %s with cell std %.3g", values.shape, scale)
    return FieldSample(grid=grid, values=values, seed=seed, kind=FieldKind.WHITE_NOISE)
