"""
Analysis

Ensemble statistics of sheets and solutions: moments and their growth,
Hölder exponents and self-similarity tests.
"""

from hermburg.analysis.holder import (
    HolderCheck,
    HolderFit,
    estimate_holder,
    holder_bound,
    holder_bound_check,
)
from hermburg.analysis.moments import (
    EnsembleStats,
    HypercontractivityReport,
    MomentGrowthReport,
    empirical_moments,
    excess_kurtosis,
    hypercontractivity_check,
    moment_growth_check,
)
from hermburg.analysis.scaling import ScalingReport, sheet_scaling_test, solution_scaling_probe
from hermburg.core.jackknife import jackknife, jackknife_mean_se

__all__ = [
    "EnsembleStats",
    "empirical_moments",
    "MomentGrowthReport",
    "moment_growth_check",
    "excess_kurtosis",
    "HypercontractivityReport",
    "hypercontractivity_check",
    "HolderFit",
    "HolderCheck",
    "estimate_holder",
    "holder_bound",
    "holder_bound_check",
    "ScalingReport",
    "sheet_scaling_test",
    "solution_scaling_probe",
    "jackknife",
    "jackknife_mean_se",
]
