"""
Noise

Realizations of the Hermite sheet on a grid: an exact Gaussian sampler for
q = 1, kernel and noncentral-limit constructions for q >= 2, white noise,
and the HBF1 / CSV field formats.
"""

from hermburg.noise.exact import MAX_EXACT_AXIS, MAX_EXACT_POINTS, sample_fbm_sheet_exact
from hermburg.noise.fieldio import (
    FieldFormatError,
    read_field,
    write_field,
    write_field_csv,
)
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec
from hermburg.noise.hermite import hermite_poly
from hermburg.noise.kernel_sampler import (
    MAX_KERNEL_ORDER,
    TruncationSpec,
    sample_hermite_sheet_kernel,
)
from hermburg.noise.ncl import sample_hermite_sheet_ncl
from hermburg.noise.sampling import (
    SamplerKind,
    sample_sheet,
    sample_sheet_ensemble,
    stack_values,
)
from hermburg.noise.white import sample_white_noise

__all__ = [
    "GridSpec",
    "SeedSpec",
    "FieldKind",
    "FieldSample",
    "TruncationSpec",
    "SamplerKind",
    "sample_white_noise",
    "hermite_poly",
    "sample_fbm_sheet_exact",
    "sample_hermite_sheet_kernel",
    "sample_hermite_sheet_ncl",
    "sample_sheet",
    "sample_sheet_ensemble",
    "stack_values",
    "read_field",
    "write_field",
    "write_field_csv",
    "FieldFormatError",
    "MAX_EXACT_AXIS",
    "MAX_EXACT_POINTS",
    "MAX_KERNEL_ORDER",
]
