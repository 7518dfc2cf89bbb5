"""
hermburg - stochastic Burgers equations driven by Hermite sheets

Samples Hermite sheets of any chaos order, integrates step functions
against them, solves the mild stochastic Burgers equation on a periodic
domain and checks the statistical properties of sheets and solutions.

Example:
    >>> from hermburg import ExperimentRunner, load_config
    >>> runner = ExperimentRunner(load_config("hermburg.yaml"))
    >>> outcome = runner.verify(["covariance", "isometry"], "results/verify")
    >>> outcome.exit_code
    0
"""

__version__ = "0.3.0"
__license__ = "Apache-2.0"

from hermburg.checks.verifier import CHECK_REGISTRY, VerificationResult, Verifier
from hermburg.core.config import ExperimentConfig, create_default_config, load_config
from hermburg.core.errors import (
    ConfigParseError,
    DomainError,
    GridMismatchError,
    HermburgError,
    ParameterError,
    UnsupportedDimensionError,
)
from hermburg.core.runner import ExperimentRunner, ExitCode
from hermburg.kernels.params import HermiteParams, validate_params
from hermburg.kernels.sigma import SigmaSpec
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec
from hermburg.noise.sampling import SamplerKind, sample_sheet
from hermburg.solver.config import DomainSpec, SolverConfig
from hermburg.solver.picard import SolveResult, solve
from hermburg.stochint.capital_i import capital_I
from hermburg.stochint.inner import h_inner_product

__all__ = [
    # Version info
    "__version__",
    "__license__",
    # Configuration
    "ExperimentConfig",
    "load_config",
    "create_default_config",
    # Errors
    "HermburgError",
    "ParameterError",
    "DomainError",
    "GridMismatchError",
    "UnsupportedDimensionError",
    "ConfigParseError",
    # Model and lattices
    "HermiteParams",
    "validate_params",
    "SigmaSpec",
    "GridSpec",
    "SeedSpec",
    "FieldKind",
    "FieldSample",
    # Sampling, integration, solving
    "SamplerKind",
    "sample_sheet",
    "h_inner_product",
    "capital_I",
    "DomainSpec",
    "SolverConfig",
    "SolveResult",
    "solve",
    # Runs
    "ExperimentRunner",
    "ExitCode",
    "Verifier",
    "VerificationResult",
    "CHECK_REGISTRY",
]
