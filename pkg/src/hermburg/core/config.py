"""
Configuration Management for hermburg

Handles loading and validating experiment files (hermburg.yaml). One file
describes one experiment: the model, the lattices, the sampler, the
solver, the noise coefficient, the seed and the verification settings.

All quantities are dimensionless model units; no key carries a physical
unit.
"""

from __future__ import annotations

import math
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import yaml
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from hermburg.core.ensemble import MAX_THREADS
from hermburg.core.errors import ConfigParseError, ParameterError
from hermburg.kernels.params import HermiteParams
from hermburg.kernels.sigma import SigmaSpec
from hermburg.noise.grid import GridSpec, SeedSpec
from hermburg.noise.kernel_sampler import TruncationSpec
from hermburg.noise.sampling import SamplerKind
from hermburg.solver.config import DomainSpec, SolverConfig
from hermburg.stochint.capital_i import QuadratureSpec

DEFAULT_CONFIG_NAME = "hermburg.yaml"


class SamplerConfig(BaseModel):
    """Which sheet construction to use and its resolution."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SamplerKind = Field(default=SamplerKind.AUTO, description="auto, exact, kernel or ncl")
    truncation: TruncationSpec = Field(default_factory=TruncationSpec)
    ncl_m: int = Field(default=256, ge=32, description="ncl inner points per unit length")


class InitialConditionKind(str, Enum):
    """Built-in initial profiles."""

    ZERO = "zero"
    SINE = "sine"
    CONSTANT = "constant"


class InitialConditionConfig(BaseModel):
    """u0 on the periodic domain."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: InitialConditionKind = Field(default=InitialConditionKind.ZERO)
    amplitude: float = Field(default=0.5, description="Sine amplitude")
    mode: int = Field(default=1, ge=1, description="Sine wavenumber (periods per domain)")
    value: float = Field(default=0.0, description="Constant level")

    def profile(self, domain: DomainSpec) -> NDArray[np.float64]:
        """Sample u0 at the domain nodes."""
        x = np.arange(domain.n_x) * domain.L / domain.n_x
        if self.kind == InitialConditionKind.SINE:
            return self.amplitude * np.sin(2.0 * math.pi * self.mode * x / domain.L)
        if self.kind == InitialConditionKind.CONSTANT:
            return np.full(domain.n_x, self.value)
        return np.zeros(domain.n_x)


class VerifyConfig(BaseModel):
    """Statistical check settings."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_samples: int = Field(default=2000, ge=2, description="Ensemble size per check")
    lam: list[float] = Field(
        default_factory=lambda: [4.0, 1.0], description="Scale factor per coordinate"
    )
    scaling_exponents: list[float] | None = Field(
        default=None, description="Override the Hurst vector in the scaling check"
    )
    horizons: list[float] = Field(
        default_factory=lambda: [0.25, 0.5, 1.0], description="t_max values of the moment check"
    )
    moment_orders: list[float] = Field(default_factory=lambda: [2.0, 4.0])
    holder_lags: list[int] = Field(default_factory=lambda: [1, 2, 4, 8])
    holder_p: float = Field(default=2.0, gt=0.0)
    alpha: float = Field(default=0.01, gt=0.0, lt=1.0, description="Family-wise test level")

    @field_validator("lam")
    @classmethod
    def validate_lam(cls, v: list[float]) -> list[float]:
        """Scale factors must be positive."""
        if any(f <= 0 for f in v):
            raise ValueError("scale factors must be positive")
        return v


class OutputFormat(str, Enum):
    """Field file formats."""

    CSV = "csv"
    BIN = "bin"
    JSON = "json"


class OutputConfig(BaseModel):
    """Where and how results are written."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    path: str = Field(default="./results", description="Output directory path")
    format: OutputFormat = Field(default=OutputFormat.BIN, description="Field file format")


class ExperimentConfig(BaseModel):
    """Main configuration for hermburg."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    version: str = Field(default="1.0", description="Configuration version")
    model: HermiteParams = Field(default_factory=HermiteParams)
    grid: GridSpec = Field(default_factory=GridSpec, description="Lattice of sampled sheets")
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    sigma: SigmaSpec = Field(default_factory=SigmaSpec)
    initial_condition: InitialConditionConfig = Field(default_factory=InitialConditionConfig)
    quadrature: QuadratureSpec = Field(default_factory=QuadratureSpec)
    seed: SeedSpec = Field(default_factory=SeedSpec)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @classmethod
    def from_yaml(cls, content: str) -> ExperimentConfig:
        """
        Parse configuration from a YAML string.

        Raises:
            ConfigParseError: malformed YAML or unknown keys (with line/column)
            ParameterError: well-formed keys with invalid values
        """
        try:
            data = yaml.safe_load(content)
            root = yaml.compose(content)
        except yaml.MarkedYAMLError as e:
            mark = e.problem_mark or e.context_mark
            raise ConfigParseError(
                f"malformed YAML: {e.problem or e}",
                line=mark.line + 1 if mark else None,
                column=mark.column + 1 if mark else None,
            ) from e
        except yaml.YAMLError as e:
            raise ConfigParseError(f"malformed YAML: {e}") from e

        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigParseError("an experiment file must be a mapping", line=1, column=1)

        try:
            return cls.model_validate(data)
        except ValidationError as e:
            structural = [
                err for err in e.errors() if err["type"] in ("extra_forbidden", "model_type")
            ]
            if structural:
                err = structural[0]
                mark = _locate(root, err["loc"])
                where = ".".join(str(p) for p in err["loc"])
                raise ConfigParseError(
                    f"{err['msg']}: {where}",
                    line=mark.line + 1 if mark else None,
                    column=mark.column + 1 if mark else None,
                ) from e
            raise ParameterError(_describe(e)) from e

    def to_yaml(self) -> str:
        """Serialize configuration to YAML string."""
        data = self.model_dump(mode="json")
        return yaml.safe_dump(data, default_flow_style=False, sort_keys=False)

    def solver_u0(self) -> NDArray[np.float64]:
        """Initial profile on the solver domain."""
        return self.initial_condition.profile(self.solver.domain)


def _describe(error: ValidationError) -> str:
    parts = []
    for err in error.errors():
        where = ".".join(str(p) for p in err["loc"])
        parts.append(f"{where}: {err['msg']}")
    return "; ".join(parts)


def _locate(node: yaml.Node | None, loc: tuple[Any, ...]) -> yaml.Mark | None:
    """Start mark of the YAML node at a pydantic error location."""
    mark = node.start_mark if node is not None else None
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            match = next((k for k, _ in node.value if k.value == str(key)), None)
            if match is None:
                break
            mark = match.start_mark
            node = dict((k.value, v) for k, v in node.value)[str(key)]
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
            mark = node.start_mark
        else:
            break
    return mark


class RuntimeSettings(BaseSettings):
    """Process-level settings read from HB_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="HB_", extra="ignore")

    threads: int = Field(default=1, ge=1, le=MAX_THREADS, description="Worker threads")


def load_config(path: str | Path) -> ExperimentConfig:
    """
    Load and validate a hermburg experiment file.

    Args:
        path: Path to the hermburg.yaml file

    Returns:
        Validated ExperimentConfig object

    Raises:
        FileNotFoundError: If the config file doesn't exist
        ConfigParseError: If the file is malformed or has unknown keys
        ParameterError: If a value is invalid
    """
    config_path = Path(path)

    if not config_path.exists():
        raise FileNotFoundError(
            f"Configuration file not found: {config_path}\n"
            "Run 'hermburg init' to create a new configuration file."
        )

    content = config_path.read_text(encoding="utf-8")
    return ExperimentConfig.from_yaml(content)


def create_default_config() -> ExperimentConfig:
    """Create a default configuration for initialization."""
    return ExperimentConfig(
        version="1.0",
        model=HermiteParams(q=1, hurst=(0.7, 0.7), d=1, nu=0.1),
        grid=GridSpec(t_max=1.0, n_t=16, L=1.0, n_x=16, d=1),
        solver=SolverConfig(domain=DomainSpec(L=2 * math.pi, n_x=64, t_max=0.25, n_t=256)),
        sigma=SigmaSpec(value=0.1),
        initial_condition=InitialConditionConfig(kind=InitialConditionKind.SINE, amplitude=0.5),
        seed=SeedSpec(master_seed=20240101),
        verify=VerifyConfig(n_samples=2000),
        output=OutputConfig(path="./results", format=OutputFormat.BIN),
    )
