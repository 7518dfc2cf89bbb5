"""Sampler selection and sheet ensembles shared by checks and the CLI."""

from __future__ import annotations

from enum import Enum

import numpy as np
from numpy.typing import NDArray

from hermburg.core.ensemble import run_ensemble
from hermburg.kernels.params import HermiteParams
from hermburg.noise.exact import sample_fbm_sheet_exact
from hermburg.noise.grid import FieldSample, GridSpec, SeedSpec
from hermburg.noise.kernel_sampler import TruncationSpec, sample_hermite_sheet_kernel
from hermburg.noise.ncl import sample_hermite_sheet_ncl


class SamplerKind(str, Enum):
    """Sheet construction."""

    AUTO = "auto"
    EXACT = "exact"
    KERNEL = "kernel"
    NCL = "ncl"


def resolve_sampler(kind: SamplerKind, q: int) -> SamplerKind:
    """Concrete sampler for kind; auto means exact for q = 1, kernel otherwise."""
    if kind == SamplerKind.AUTO:
        return SamplerKind.EXACT if q == 1 else SamplerKind.KERNEL
    if kind == SamplerKind.EXACT and q != 1:
        raise ValueError("the exact sampler only exists for q = 1")
    return kind


def sample_sheet(
    params: HermiteParams,
    grid: GridSpec,
    seed: SeedSpec,
    sampler: SamplerKind = SamplerKind.AUTO,
    trunc: TruncationSpec | None = None,
    m: int = 256,
) -> FieldSample:
    """Draw one sheet with the requested construction."""
    kind = resolve_sampler(sampler, params.q)
    if kind == SamplerKind.EXACT:
        sample = sample_fbm_sheet_exact(params.hurst, grid, seed)
        sample.params = params
        return sample
    if kind == SamplerKind.KERNEL:
        return sample_hermite_sheet_kernel(params, grid, trunc or TruncationSpec(), seed)
    return sample_hermite_sheet_ncl(params, grid, m, seed)


def sample_sheet_ensemble(
    params: HermiteParams,
    grid: GridSpec,
    seed: SeedSpec,
    n: int,
    sampler: SamplerKind = SamplerKind.AUTO,
    trunc: TruncationSpec | None = None,
    m: int = 256,
    threads: int = 1,
    show_progress: bool = False,
) -> list[FieldSample]:
    """
    n sheets, member i drawn from seed.spawn(i).

    Member 0 is drawn first on the calling thread so that sampler setup and
    calibration happen once before workers start.
    """
    if n < 1:
        return []
    first = sample_sheet(params, grid, seed.spawn(0), sampler, trunc, m)
    rest = run_ensemble(
        lambda i: sample_sheet(params, grid, seed.spawn(i + 1), sampler, trunc, m),
        n - 1,
        threads=threads,
        show_progress=show_progress,
        description="Sampling sheets...",
    )
    return [first, *rest]


def stack_values(samples: list[FieldSample]) -> NDArray[np.float64]:
    """Stack field values along a new leading sample axis, checking grids."""
    if not samples:
        raise ValueError("empty ensemble")
    grid, kind = samples[0].grid, samples[0].kind
    for sample in samples[1:]:
        grid.require_same(sample.grid)
        if sample.kind != kind:
            raise ValueError("ensemble mixes field kinds")
    return np.stack([s.values for s in samples])
