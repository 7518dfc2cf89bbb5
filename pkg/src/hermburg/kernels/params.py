"""
Model Parameters and the Admissibility Gate

HermiteParams is the identity card of a model: chaos order q, Hurst vector
(H_0, ..., H_d), spatial dimension d and viscosity nu. Construction only
enforces structural invariants; the Hurst range and the stochastic
convolution condition are reported by validate_params so that inadmissible
parameters can be inspected instead of crashing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, model_validator

from hermburg.core.errors import DomainError


class HermiteParams(BaseModel):
    """Order, Hurst vector, dimension and viscosity of a model."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    q: int = Field(default=1, ge=1, description="Chaos order of the Hermite sheet")
    hurst: tuple[float, ...] = Field(
        default=(0.7, 0.7),
        description="Hurst vector (H_0 for time, H_1..H_d for space)",
    )
    d: int = Field(default=1, ge=1, description="Spatial dimension")
    nu: float = Field(default=0.1, gt=0.0, description="Viscosity")

    @model_validator(mode="after")
    def validate_hurst_length(self) -> HermiteParams:
        """The Hurst vector carries one entry per coordinate."""
        if len(self.hurst) != self.d + 1:
            raise ValueError(
                f"hurst must have d + 1 = {self.d + 1} entries, got {len(self.hurst)}"
            )
        return self

    @property
    def h0(self) -> float:
        """Temporal Hurst parameter."""
        return self.hurst[0]

    @property
    def spatial_hurst(self) -> tuple[float, ...]:
        """Spatial Hurst parameters H_1..H_d."""
        return self.hurst[1:]


@dataclass
class ValidationReport:
    """Outcome of the admissibility gate."""

    valid: bool
    lhs: float
    """2 H_0 + sum of the spatial H_i."""

    rhs: float
    """d + 1 - 1/q."""

    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "valid": self.valid,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "violations": list(self.violations),
        }


def _exact(value: float) -> Fraction:
    # repr gives the shortest decimal that round-trips, so 0.55 becomes 11/20
    return Fraction(repr(float(value)))


def validate_params(params: HermiteParams) -> ValidationReport:
    """
    Check the Hurst range and the stochastic convolution condition.

    The comparison 2 H_0 + sum H_i > d + 1 - 1/q is done in exact rational
    arithmetic on the decimal representation of the inputs.

    Args:
        params: Model parameters

    Returns:
        ValidationReport; never raises for numeric inputs
    """
    violations: list[str] = []
    finite = all(math.isfinite(h) for h in params.hurst)

    for i, h in enumerate(params.hurst):
        if not math.isfinite(h) or not 0.5 < h < 1.0:
            violations.append(f"H_{i} outside (1/2,1)")

    if finite:
        lhs_exact = 2 * _exact(params.hurst[0]) + sum(
            (_exact(h) for h in params.hurst[1:]), Fraction(0)
        )
        rhs_exact = params.d + 1 - Fraction(1, params.q)
        lhs, rhs = float(lhs_exact), float(rhs_exact)
        if not lhs_exact > rhs_exact:
            violations.append(
                f"2H_0 + sum(H_i) = {lhs:.6g} must exceed d + 1 - 1/q = {rhs:.6g}"
            )
    else:
        lhs = math.nan
        rhs = params.d + 1 - 1 / params.q

    return ValidationReport(
        valid=not violations,
        lhs=lhs,
        rhs=rhs,
        violations=violations,
    )


def require_valid(params: HermiteParams) -> None:
    """Raise DomainError listing every violation when params are inadmissible."""
    report = validate_params(params)
    if not report.valid:
        raise DomainError("; ".join(report.violations))


def kernel_exponent(h: float, q: int) -> float:
    """
    Exponent beta = 1/2 + (1 - h)/q of the Hermite sheet kernel.

    Raises:
        DomainError: if h is not in (1/2, 1) or q < 1
    """
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if not 0.5 < h < 1.0:
        raise DomainError(f"Hurst parameter must lie in (1/2, 1), got {h}")
    return 0.5 + (1.0 - h) / q
