"""
Tests for model parameters, the heat kernel, covariances and sigma.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError
from scipy.integrate import trapezoid

from hermburg.core.errors import DomainError
from hermburg.kernels.covariance import fbm_covariance, sheet_covariance
from hermburg.kernels.heat import heat_kernel, heat_kernel_gradient
from hermburg.kernels.params import (
    HermiteParams,
    kernel_exponent,
    require_valid,
    validate_params,
)
from hermburg.kernels.sigma import SigmaKind, SigmaSpec, check_sigma, validate_model


class TestValidateParams:
    """Tests for the admissibility gate."""

    def test_valid_gaussian_model(self):
        """q = 1, H = (0.7, 0.7) passes with lhs 2.1 and rhs 1."""
        report = validate_params(HermiteParams(q=1, hurst=(0.7, 0.7), d=1))

        assert report.valid
        assert report.lhs == pytest.approx(2.1)
        assert report.rhs == pytest.approx(1.0)
        assert report.violations == []

    def test_convolution_condition_fails(self):
        """2 * 0.51 + 2 * 0.51 = 2.04 does not exceed 3 - 1/2."""
        report = validate_params(HermiteParams(q=2, hurst=(0.51, 0.51, 0.51), d=2))

        assert not report.valid
        assert report.lhs == pytest.approx(2.04)
        assert report.rhs == pytest.approx(2.5)
        assert len(report.violations) == 1

    def test_equality_is_rejected_exactly(self):
        """2 * 0.6 + 0.65 + 0.65 equals 3 - 1/2 in exact arithmetic."""
        report = validate_params(HermiteParams(q=2, hurst=(0.6, 0.65, 0.65), d=2))

        assert not report.valid
        assert report.lhs == pytest.approx(report.rhs)

    def test_just_above_boundary(self):
        """A tiny margin above the boundary is admissible."""
        report = validate_params(HermiteParams(q=2, hurst=(0.6, 0.65, 0.651), d=2))

        assert report.valid

    def test_hurst_out_of_range_reported(self):
        """Every offending coordinate is listed."""
        report = validate_params(HermiteParams(q=1, hurst=(0.5, 1.0), d=1))

        assert not report.valid
        assert "H_0 outside (1/2,1)" in report.violations
        assert "H_1 outside (1/2,1)" in report.violations

    def test_require_valid_raises(self):
        """require_valid turns violations into DomainError."""
        with pytest.raises(DomainError):
            require_valid(HermiteParams(q=2, hurst=(0.51, 0.51, 0.51), d=2))

    def test_hurst_length_enforced(self):
        """The Hurst vector carries d + 1 entries."""
        with pytest.raises(ValidationError):
            HermiteParams(q=1, hurst=(0.7, 0.7, 0.7), d=1)

    def test_report_to_dict(self):
        """Report serializes both sides of the condition."""
        data = validate_params(HermiteParams()).to_dict()

        assert set(data) == {"valid", "lhs", "rhs", "violations"}

    @given(
        q=st.integers(min_value=1, max_value=4),
        h=st.lists(st.floats(min_value=0.51, max_value=0.99), min_size=2, max_size=4),
    )
    @settings(max_examples=50, deadline=None)
    def test_gate_matches_inequality(self, q, h):
        """The verdict agrees with the inequality away from the boundary."""
        d = len(h) - 1
        params = HermiteParams(q=q, hurst=tuple(h), d=d)
        lhs = 2 * h[0] + sum(h[1:])
        rhs = d + 1 - 1 / q
        if abs(lhs - rhs) > 1e-9:
            assert validate_params(params).valid == (lhs > rhs)

    @given(
        q=st.integers(min_value=1, max_value=4),
        h=st.lists(st.floats(min_value=0.51, max_value=0.98), min_size=2, max_size=4),
        index=st.integers(min_value=0, max_value=3),
        fraction=st.floats(min_value=0.0, max_value=1.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_gate_monotone_in_each_hurst(self, q, h, index, fraction):
        """Raising any H_i never turns an admissible model inadmissible."""
        d = len(h) - 1
        index %= d + 1
        raised = list(h)
        raised[index] += fraction * (0.99 - raised[index])

        before = validate_params(HermiteParams(q=q, hurst=tuple(h), d=d))
        after = validate_params(HermiteParams(q=q, hurst=tuple(raised), d=d))
        if before.valid:
            assert after.valid
        assert after.lhs >= before.lhs


class TestKernelExponent:
    """Tests for the Hermite kernel exponent."""

    def test_gaussian_exponent(self):
        """beta = 1/2 + (1 - H) / q."""
        assert kernel_exponent(0.7, 1) == pytest.approx(0.8)
        assert kernel_exponent(0.7, 2) == pytest.approx(0.65)

    def test_out_of_range(self):
        """H must lie in (1/2, 1)."""
        with pytest.raises(DomainError):
            kernel_exponent(0.5, 1)
        with pytest.raises(DomainError):
            kernel_exponent(0.7, 0)


class TestHeatKernel:
    """Tests for the heat kernel."""

    def test_value_at_origin(self):
        """G_1(0) = (4 pi nu)^(-1/2)."""
        assert heat_kernel(1.0, 0.0, 0.25) == pytest.approx(1.0 / math.sqrt(math.pi))

    def test_unit_mass(self):
        """The kernel integrates to one."""
        x = np.linspace(-10.0, 10.0, 4001)
        mass = trapezoid(heat_kernel(0.5, x, 0.3), x)

        assert mass == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("x", [-1.0, 0.0, 0.7, 2.0])
    def test_semigroup(self, x):
        """int G_s(x - y) G_t(y) dy = G_{s+t}(x)."""
        y = np.linspace(-12.0, 12.0, 24001)
        convolved = trapezoid(heat_kernel(0.3, x - y, 0.2) * heat_kernel(0.5, y, 0.2), y)

        assert convolved == pytest.approx(heat_kernel(0.8, x, 0.2), abs=1e-8)

    def test_two_dimensional_is_product(self):
        """G in d = 2 factorizes over coordinates."""
        point = np.array([0.3, -0.2])
        expected = heat_kernel(0.4, 0.3, 0.1) * heat_kernel(0.4, -0.2, 0.1)

        assert heat_kernel(0.4, point, 0.1, d=2) == pytest.approx(expected)

    def test_gradient_points_inward(self):
        """The gradient is negative to the right of the origin."""
        assert heat_kernel_gradient(1.0, 0.5, 0.1) < 0
        assert heat_kernel_gradient(1.0, -0.5, 0.1) > 0
        assert heat_kernel_gradient(1.0, 0.0, 0.1) == 0.0

    def test_requires_positive_time(self):
        """t <= 0 is outside the domain."""
        with pytest.raises(DomainError):
            heat_kernel(0.0, 1.0, 0.1)
        with pytest.raises(DomainError):
            heat_kernel(1.0, 1.0, 0.0)


class TestCovariance:
    """Tests for fBm and sheet covariances."""

    def test_fbm_variance(self):
        """Var B_t = t^(2H)."""
        assert float(fbm_covariance(2.0, 2.0, 0.75)) == pytest.approx(2.0**1.5)

    def test_sheet_unit_point(self):
        """E[Z(1,1)^2] = 1."""
        assert sheet_covariance((1.0, 1.0), (1.0, 1.0), (0.7, 0.8)) == pytest.approx(1.0)

    def test_sheet_is_product(self):
        """Covariance factorizes over coordinates."""
        t, s, hurst = (0.5, 1.0), (1.0, 0.25), (0.7, 0.6)
        expected = float(fbm_covariance(0.5, 1.0, 0.7) * fbm_covariance(1.0, 0.25, 0.6))

        assert sheet_covariance(t, s, hurst) == pytest.approx(expected)

    @given(
        t=st.tuples(st.floats(0.0, 2.0), st.floats(0.0, 2.0)),
        s=st.tuples(st.floats(0.0, 2.0), st.floats(0.0, 2.0)),
        lam=st.tuples(st.floats(0.25, 4.0), st.floats(0.25, 4.0)),
        hurst=st.tuples(st.floats(0.51, 0.99), st.floats(0.51, 0.99)),
    )
    @settings(max_examples=100, deadline=None)
    def test_scaling_identity(self, t, s, lam, hurst):
        """R(lam t, lam s) = prod lam_i^(2 H_i) R(t, s)."""
        factor = math.prod(f ** (2 * h) for f, h in zip(lam, hurst))
        scaled_t = tuple(f * v for f, v in zip(lam, t))
        scaled_s = tuple(f * v for f, v in zip(lam, s))

        expected = factor * sheet_covariance(t, s, hurst)
        assert sheet_covariance(scaled_t, scaled_s, hurst) == pytest.approx(
            expected, rel=1e-12, abs=1e-12 * factor
        )

    def test_vectorized(self):
        """Arrays of points give arrays of covariances."""
        points = np.array([[0.5, 0.5], [1.0, 1.0]])

        result = sheet_covariance(points, points, (0.7, 0.7))
        assert result.shape == (2,)

    def test_negative_coordinates_rejected(self):
        """The sheet lives on the positive orthant."""
        with pytest.raises(ValueError):
            sheet_covariance((-1.0, 1.0), (1.0, 1.0), (0.7, 0.7))


class TestSigma:
    """Tests for noise coefficients."""

    def test_default_is_zero(self):
        """The default coefficient vanishes."""
        assert SigmaSpec().is_zero
        assert not SigmaSpec(value=0.1).is_zero

    def test_affine_evaluate_broadcasts(self):
        """sigma = a + b u broadcast over (t, x, u)."""
        sigma = SigmaSpec(kind=SigmaKind.AFFINE, intercept=0.1, slope=0.5)
        u = np.array([[0.0, 1.0, 2.0]])

        values = sigma.evaluate(0.0, np.zeros((2, 1)), u)
        assert values.shape == (2, 3)
        np.testing.assert_allclose(values[0], [0.1, 0.6, 1.1])

    def test_tabulated_interpolates(self):
        """Piecewise linear between knots, constant outside."""
        sigma = SigmaSpec(kind=SigmaKind.TABULATED, knots=(0.0, 1.0), values=(0.0, 2.0))

        np.testing.assert_allclose(sigma.evaluate(0, 0, [-1.0, 0.5, 3.0]), [0.0, 1.0, 2.0])
        assert sigma.lipschitz == pytest.approx(2.0)

    def test_tabulated_needs_increasing_knots(self):
        """Knots must be strictly increasing."""
        with pytest.raises(ValidationError):
            SigmaSpec(kind=SigmaKind.TABULATED, knots=(1.0, 0.0), values=(0.0, 1.0))

    def test_declared_bound_too_tight(self):
        """A declared Lipschitz bound below the coefficients is rejected."""
        with pytest.raises(ValidationError):
            SigmaSpec(kind=SigmaKind.AFFINE, slope=2.0, lipschitz_bound=1.0)

    def test_scaled(self):
        """scaled multiplies every coefficient."""
        sigma = SigmaSpec(kind=SigmaKind.AFFINE, intercept=0.2, slope=0.4).scaled(0.5)

        assert sigma.intercept == pytest.approx(0.1)
        assert sigma.slope == pytest.approx(0.2)

    def test_check_sigma_passes(self):
        """Affine sigma satisfies its own bounds."""
        check = check_sigma(SigmaSpec(kind=SigmaKind.AFFINE, intercept=0.1, slope=0.5))

        assert check.passed
        assert check.max_lipschitz_ratio == pytest.approx(0.5)
        assert check.sup_at_zero == pytest.approx(0.1)

    def test_validate_model_merges(self):
        """Parameter violations carry through validate_model."""
        params = HermiteParams(q=2, hurst=(0.51, 0.51, 0.51), d=2)

        report = validate_model(params, SigmaSpec(value=1.0))
        assert not report.valid
        assert report.lhs == pytest.approx(2.04)
