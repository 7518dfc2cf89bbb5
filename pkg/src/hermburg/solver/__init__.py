"""
Solver

The one-dimensional periodic mild form driven by a Hermite sheet: spectral
building blocks, Picard and time-stepping solvers and the Cole-Hopf
reference solution for sigma = 0.
"""

from hermburg.solver.cole_hopf import cole_hopf_exact
from hermburg.solver.config import DomainSpec, InitialGuess, SolverConfig, SolverScheme
from hermburg.solver.picard import (
    SIGN_CONVENTION,
    SolveResult,
    picard_solve,
    solve,
    solve_ensemble,
    step_solve,
)
from hermburg.solver.spectral import (
    frozen_kernel,
    heat_semigroup_apply,
    nonlinear_increment,
    stochastic_increment,
)

__all__ = [
    "DomainSpec",
    "SolverConfig",
    "SolverScheme",
    "InitialGuess",
    "SolveResult",
    "SIGN_CONVENTION",
    "heat_semigroup_apply",
    "nonlinear_increment",
    "stochastic_increment",
    "frozen_kernel",
    "picard_solve",
    "step_solve",
    "solve",
    "solve_ensemble",
    "cole_hopf_exact",
]
