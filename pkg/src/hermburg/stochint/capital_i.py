"""
The Stochastic Convolution Integral I(t)

    I(t) = int int int int G_{t-s}(x-y) G_{t-r}(x-z) |s-r|^(2H_0-2)
                                  prod_i |y_i - z_i|^(2H_i-2)

over s, r in [0, t] and y, z in R^d. It does not depend on x. For fixed
times the spatial integral is the expectation E|Y - Z|^(2H_i - 2) of
independent centered Gaussians with variances 2 nu a and 2 nu b, which
is (4 nu (a + b))^(H_i - 1) Gamma(H_i - 1/2) / sqrt(pi) per coordinate.
What remains is

    K int int_[0,t]^2 |u - v|^(2H_0 - 2) (u + v)^kappa,  kappa = sum_i (H_i - 1)

which is split along the diagonal and mapped by v = u w onto
[0, t] x [0, 1]. Both remaining endpoint singularities (u = 0, w = 1)
are handled with geometrically graded Gauss-Legendre panels. The panel
count doubles until two successive values agree to rtol.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gamma, roots_legendre

from hermburg.core.errors import DivergenceWarning, DomainError
from hermburg.kernels.params import HermiteParams, validate_params

logger = logging.getLogger(__name__)


class QuadratureSpec(BaseModel):
    """Resolution of the I(t) quadrature."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    order: int = Field(default=8, ge=2, le=64, description="Gauss-Legendre nodes per panel")
    initial_panels: int = Field(default=4, ge=1, description="Panels per axis before refinement")
    max_panels: int = Field(default=256, ge=1, description="Panel budget per axis")
    rtol: float = Field(default=0.02, gt=0.0, description="Relative change accepted as converged")
    grading: float = Field(
        default=0.15, gt=0.0, lt=1.0, description="Width ratio of successive graded panels"
    )


@dataclass
class CapitalIResult:
    """Value of I(t) with its refinement history."""

    value: float
    converged: bool
    divergence_flag: bool
    refinements: int
    relative_change: float
    panels: int

    @property
    def accepted(self) -> bool:
        """Converged and inside the admissible parameter region."""
        return self.converged and not self.divergence_flag

    def __float__(self) -> float:
        return self.value

    def to_dict(self) -> dict:
        """Convert to dictionary for serialization."""
        return {
            "value": self.value,
            "converged": self.converged,
            "divergence_flag": self.divergence_flag,
            "accepted": self.accepted,
            "refinements": self.refinements,
            "relative_change": self.relative_change,
            "panels": self.panels,
        }


def spatial_factor(params: HermiteParams) -> float:
    """prod_i (4 nu)^(H_i - 1) Gamma(H_i - 1/2) / sqrt(pi); inf if some H_i <= 1/2."""
    factor = 1.0
    for h in params.spatial_hurst:
        if h <= 0.5:
            return math.inf
        factor *= (4.0 * params.nu) ** (h - 1.0) * float(gamma(h - 0.5)) / math.sqrt(math.pi)
    return factor


def graded_rule(
    panels: int, order: int, ratio: float, toward_one: bool = False
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Composite Gauss-Legendre rule on [0, 1] with panels shrinking geometrically
    toward 0 (or toward 1).
    """
    breaks = np.concatenate(([0.0], ratio ** np.arange(panels - 1, -1, -1.0)))
    nodes, weights = roots_legendre(order)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    x = (lo + 0.5 * (hi - lo) * (nodes + 1.0)).ravel()
    w = (0.5 * (hi - lo) * weights).ravel()
    if toward_one:
        x = 1.0 - x[::-1]
        w = w[::-1]
    return x, w


def _time_integral(t: float, h0: float, kappa: float, panels: int, quad: QuadratureSpec) -> float:
    u_frac, u_w = graded_rule(panels, quad.order, quad.grading)
    w, w_w = graded_rule(panels, quad.order, quad.grading, toward_one=True)
    u = t * u_frac
    # v = u w on the lower triangle; the upper triangle is its mirror image
    integrand = (
        u[:, None] ** (2.0 * h0 - 1.0 + kappa)
        * (1.0 - w[None, :]) ** (2.0 * h0 - 2.0)
        * (1.0 + w[None, :]) ** kappa
    )
    return 2.0 * t * float(u_w @ integrand @ w_w)


def capital_I(
    t: float, params: HermiteParams, quad: QuadratureSpec | None = None
) -> CapitalIResult:
    """
    Evaluate I(t) by refinement doubling.

    Outside the admissible region a DivergenceWarning is emitted and the
    truncated quadrature value is returned with divergence_flag set.

    Args:
        t: Time horizon, > 0
        params: Model parameters
        quad: Quadrature resolution

    Returns:
        CapitalIResult
    """
    if not t > 0:
        raise DomainError(f"capital_I needs t > 0, got {t}")
    quad = quad or QuadratureSpec()

    report = validate_params(params)
    divergence = not report.valid
    if divergence:
        message = "I(t) evaluated outside the admissible region: " + "; ".join(report.violations)
        logger.warning(message)
        warnings.warn(message, DivergenceWarning, stacklevel=2)

    k = spatial_factor(params)
    if math.isinf(k):
        return CapitalIResult(math.inf, False, divergence, 0, math.inf, 0)

    kappa = sum(h - 1.0 for h in params.spatial_hurst)
    panels = quad.initial_panels
    previous = k * _time_integral(t, params.h0, kappa, panels, quad)
    change = math.inf
    refinements = 0
    converged = False
    while 2 * panels <= quad.max_panels:
        panels *= 2
        refinements += 1
        with np.errstate(over="ignore"):
            value = k * _time_integral(t, params.h0, kappa, panels, quad)
        if not math.isfinite(value):
            previous = value
            change = math.inf
            break
        change = abs(value - previous) / abs(value) if value else 0.0
        previous = value
        logger.debug("I(%g): panels=%d value=%.6g change=%.3g", t, panels, value, change)
        if change < quad.rtol:
            converged = True
            break

    return CapitalIResult(
        value=previous,
        converged=converged,
        divergence_flag=divergence,
        refinements=refinements,
        relative_change=change,
        panels=panels,
    )
