"""
Noise Coefficient

sigma(t, x, u) multiplies the Hermite sheet in the stochastic forcing. Three
families are supported; each carries a Lipschitz bound L and a linear growth
bound C so that |sigma(u) - sigma(v)| <= L |u - v| and |sigma(u)| <= C (1 + |u|).
Bounds are derived from the coefficients; user supplied bounds may be looser
but never tighter.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from hermburg.kernels.params import HermiteParams, ValidationReport, validate_params

_BOUND_SLACK = 1e-12


class SigmaKind(str, Enum):
    """Supported coefficient families."""

    CONSTANT = "constant"
    AFFINE = "affine"
    TABULATED = "tabulated-lipschitz"


class SigmaSpec(BaseModel):
    """
    Noise coefficient sigma(u).

    constant: sigma = value
    affine: sigma = intercept + slope * u
    tabulated-lipschitz: piecewise linear in u through (knots, values),
    held constant outside the knot range
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SigmaKind = Field(default=SigmaKind.CONSTANT)
    value: float = Field(default=0.0, description="Constant coefficient")
    intercept: float = Field(default=0.0, description="Affine intercept")
    slope: float = Field(default=0.0, description="Affine slope in u")
    knots: tuple[float, ...] = Field(default=(), description="Tabulated u knots")
    values: tuple[float, ...] = Field(default=(), description="Tabulated sigma values")
    lipschitz_bound: float | None = Field(default=None, ge=0.0)
    growth_bound: float | None = Field(default=None, ge=0.0)

    @model_validator(mode="after")
    def validate_coefficients(self) -> SigmaSpec:
        """Check tabulated data and that supplied bounds are not too tight."""
        if self.kind == SigmaKind.TABULATED:
            if len(self.knots) < 2 or len(self.knots) != len(self.values):
                raise ValueError("tabulated sigma needs >= 2 knots and matching values")
            if np.any(np.diff(self.knots) <= 0):
                raise ValueError("tabulated sigma knots must be strictly increasing")
        if not np.all(np.isfinite([self.value, self.intercept, self.slope, *self.values])):
            raise ValueError("sigma coefficients must be finite")

        lip, growth = self.derived_bounds()
        if self.lipschitz_bound is not None and self.lipschitz_bound + _BOUND_SLACK < lip:
            raise ValueError(
                f"lipschitz_bound {self.lipschitz_bound} is below the derived bound {lip}"
            )
        if self.growth_bound is not None and self.growth_bound + _BOUND_SLACK < growth:
            raise ValueError(
                f"growth_bound {self.growth_bound} is below the derived bound {growth}"
            )
        return self

    def derived_bounds(self) -> tuple[float, float]:
        """Smallest Lipschitz and growth constants implied by the coefficients."""
        if self.kind == SigmaKind.CONSTANT:
            return 0.0, abs(self.value)
        if self.kind == SigmaKind.AFFINE:
            return abs(self.slope), max(abs(self.intercept), abs(self.slope))
        slopes = np.diff(self.values) / np.diff(self.knots)
        return float(np.max(np.abs(slopes))), float(np.max(np.abs(self.values)))

    @property
    def lipschitz(self) -> float:
        """Lipschitz constant in u."""
        if self.lipschitz_bound is not None:
            return self.lipschitz_bound
        return self.derived_bounds()[0]

    @property
    def growth(self) -> float:
        """Linear growth constant."""
        return self.growth_bound if self.growth_bound is not None else self.derived_bounds()[1]

    @property
    def is_state_independent(self) -> bool:
        """True when sigma does not depend on u."""
        return self.kind == SigmaKind.CONSTANT or (
            self.kind == SigmaKind.AFFINE and self.slope == 0.0
        )

    @property
    def is_zero(self) -> bool:
        """True when sigma vanishes identically."""
        if self.kind == SigmaKind.CONSTANT:
            return self.value == 0.0
        if self.kind == SigmaKind.AFFINE:
            return self.intercept == 0.0 and self.slope == 0.0
        return all(v == 0.0 for v in self.values)

    def evaluate(self, t: ArrayLike, x: ArrayLike, u: ArrayLike) -> NDArray[np.float64]:
        """Evaluate sigma, broadcasting t, x and u against each other."""
        u_arr = np.asarray(u, dtype=float)
        shape = np.broadcast_shapes(np.shape(t), np.shape(x), u_arr.shape)
        if self.kind == SigmaKind.CONSTANT:
            return np.full(shape, self.value)
        if self.kind == SigmaKind.AFFINE:
            return np.broadcast_to(self.intercept + self.slope * u_arr, shape).copy()
        return np.broadcast_to(np.interp(u_arr, self.knots, self.values), shape).copy()

    def scaled(self, factor: float) -> SigmaSpec:
        """Return factor * sigma with bounds rescaled accordingly."""
        return self.model_copy(
            update={
                "value": self.value * factor,
                "intercept": self.intercept * factor,
                "slope": self.slope * factor,
                "values": tuple(v * factor for v in self.values),
                "lipschitz_bound": None,
                "growth_bound": None,
            }
        )


@dataclass
class SigmaCheck:
    """Result of checking sigma against its declared bounds on test triples."""

    lipschitz_ok: bool
    growth_ok: bool
    integrability_ok: bool
    max_lipschitz_ratio: float
    max_growth_ratio: float
    sup_at_zero: float
    """sup over the tested (t, x) of |sigma(t, x, 0)|."""

    @property
    def passed(self) -> bool:
        """True when every condition holds."""
        return self.lipschitz_ok and self.growth_ok and self.integrability_ok

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "passed": self.passed,
            "lipschitz_ok": self.lipschitz_ok,
            "growth_ok": self.growth_ok,
            "integrability_ok": self.integrability_ok,
            "max_lipschitz_ratio": self.max_lipschitz_ratio,
            "max_growth_ratio": self.max_growth_ratio,
            "sup_at_zero": self.sup_at_zero,
        }


def check_sigma(
    sigma: SigmaSpec,
    t_values: ArrayLike | None = None,
    x_values: ArrayLike | None = None,
    u_values: ArrayLike | None = None,
) -> SigmaCheck:
    """
    Verify the Lipschitz, growth and integrability conditions on test triples.

    Every pair of u values sharing (t, x) is tested for the Lipschitz bound.
    Integrability of sigma(t, x, 0) reduces to finiteness for deterministic
    coefficients.
    """
    t_arr = np.linspace(0.0, 1.0, 5) if t_values is None else np.asarray(t_values, float)
    x_arr = np.linspace(-1.0, 1.0, 5) if x_values is None else np.asarray(x_values, float)
    u_arr = np.linspace(-10.0, 10.0, 41) if u_values is None else np.asarray(u_values, float)

    tt, xx, uu = np.meshgrid(t_arr, x_arr, u_arr, indexing="ij")
    s = sigma.evaluate(tt, xx, uu)

    du = np.abs(u_arr[:, None] - u_arr[None, :])
    ds = np.abs(s[..., :, None] - s[..., None, :])
    off_diag = du > 0
    lip_ratio = ds[..., off_diag] / du[off_diag] if np.any(off_diag) else np.zeros(1)
    max_lip = float(np.max(lip_ratio)) if lip_ratio.size else 0.0
    growth_ratio = np.abs(s) / (1.0 + np.abs(uu))
    max_growth = float(np.max(growth_ratio))

    at_zero = sigma.evaluate(tt[..., 0], xx[..., 0], np.zeros_like(tt[..., 0]))
    sup_zero = float(np.max(np.abs(at_zero)))

    return SigmaCheck(
        lipschitz_ok=max_lip <= sigma.lipschitz + 1e-9,
        growth_ok=max_growth <= sigma.growth + 1e-9,
        integrability_ok=bool(np.isfinite(sup_zero)),
        max_lipschitz_ratio=max_lip,
        max_growth_ratio=max_growth,
        sup_at_zero=sup_zero,
    )


def validate_model(params: HermiteParams, sigma: SigmaSpec) -> ValidationReport:
    """Parameter gate plus the coefficient conditions, violations merged."""
    report = validate_params(params)
    check = check_sigma(sigma)
    violations = list(report.violations)
    if not check.lipschitz_ok:
        violations.append(
            f"sigma Lipschitz ratio {check.max_lipschitz_ratio:.6g} "
            f"exceeds bound {sigma.lipschitz:.6g}"
        )
    if not check.growth_ok:
        violations.append(
            f"sigma growth ratio {check.max_growth_ratio:.6g} exceeds bound {sigma.growth:.6g}"
        )
    if not check.integrability_ok:
        violations.append("sigma(t, x, 0) is not bounded")
    return ValidationReport(
        valid=not violations, lhs=report.lhs, rhs=report.rhs, violations=violations
    )
