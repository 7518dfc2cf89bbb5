"""
Kernels

Closed-form kernels, sheet covariance, the noise coefficient and the
parameter admissibility gate shared by every other module.
"""

from hermburg.kernels.covariance import fbm_covariance, sheet_covariance
from hermburg.kernels.heat import heat_kernel, heat_kernel_gradient
from hermburg.kernels.params import (
    HermiteParams,
    ValidationReport,
    kernel_exponent,
    require_valid,
    validate_params,
)
from hermburg.kernels.sigma import (
    SigmaCheck,
    SigmaKind,
    SigmaSpec,
    check_sigma,
    validate_model,
)

__all__ = [
    "HermiteParams",
    "ValidationReport",
    "validate_params",
    "require_valid",
    "kernel_exponent",
    "heat_kernel",
    "heat_kernel_gradient",
    "fbm_covariance",
    "sheet_covariance",
    "SigmaKind",
    "SigmaSpec",
    "SigmaCheck",
    "check_sigma",
    "validate_model",
]
