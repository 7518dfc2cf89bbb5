"""
Checks

Statistical verification of sampled sheets and solver ensembles against
closed-form targets.
"""

from hermburg.checks.base import BaseCheck, CheckResult
from hermburg.checks.statistical import (
    CovarianceCheck,
    HolderRegularityCheck,
    IsometryCheck,
    MomentsCheck,
    ScalingCheck,
    isometry_battery,
    sidak_threshold,
)
from hermburg.checks.verifier import (
    CHECK_REGISTRY,
    UnknownCheckError,
    VerificationResult,
    Verifier,
)

__all__ = [
    "BaseCheck",
    "CheckResult",
    "CHECK_REGISTRY",
    "UnknownCheckError",
    "Verifier",
    "VerificationResult",
    "CovarianceCheck",
    "IsometryCheck",
    "ScalingCheck",
    "HolderRegularityCheck",
    "MomentsCheck",
    "isometry_battery",
    "sidak_threshold",
]
