"""Solver settings: scheme, Picard tolerances and the periodic domain."""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from hermburg.noise.grid import GridSpec


class SolverScheme(str, Enum):
    """Time discretization of the mild form."""

    PICARD = "picard"
    STEP = "step"


class InitialGuess(str, Enum):
    """First Picard iterate."""

    HEAT = "heat"
    ZERO = "zero"


class DomainSpec(BaseModel):
    """Periodic interval [0, L) sampled at n_x nodes, times 0..t_max in n_t steps."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    L: float = Field(default=2 * math.pi, gt=0.0, description="Period of the spatial torus")
    n_x: int = Field(default=64, ge=2, description="Spatial nodes")
    t_max: float = Field(default=0.25, gt=0.0, description="Time horizon")
    n_t: int = Field(default=256, ge=1, description="Time steps")

    def grid(self) -> GridSpec:
        """Space-time lattice shared by the solution and the driving sheet."""
        return GridSpec(t_max=self.t_max, n_t=self.n_t, L=self.L, n_x=self.n_x, d=1)

    def wraps_heat_kernel(self, nu: float) -> bool:
        """True when the torus is too short for the heat kernel to decay before wrapping."""
        return self.L < 8.0 * math.sqrt(nu * self.t_max)


class SolverConfig(BaseModel):
    """Settings of one solve."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    picard_tol: float = Field(default=1e-10, gt=0.0, description="Sup-norm stopping tolerance")
    max_iters: int = Field(default=100, ge=1, description="Maximum Picard iterations")
    scheme: SolverScheme = Field(default=SolverScheme.PICARD)
    dealias: bool = Field(default=False, description="Apply the 2/3 rule to u^2/2")
    initial_guess: InitialGuess = Field(default=InitialGuess.ZERO)
    domain: DomainSpec = Field(default_factory=DomainSpec)
