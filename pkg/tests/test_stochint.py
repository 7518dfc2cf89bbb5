"""
Tests for step functions, the H inner product, discrete integrals and I(t).
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.integrate import quad
from scipy.special import gamma

from hermburg.core.errors import DivergenceWarning, DomainError, GridMismatchError
from hermburg.kernels.params import HermiteParams
from hermburg.noise.grid import GridSpec, SeedSpec
from hermburg.noise.sampling import sample_sheet
from hermburg.stochint.capital_i import QuadratureSpec, capital_I, graded_rule
from hermburg.stochint.inner import h_inner_product, h_norm_squared
from hermburg.stochint.integral import (
    integrate_step,
    isometry_report,
    rectangular_increments,
    z_score,
)
from hermburg.stochint.step import StepFunction


class TestStepFunction:
    """Tests for step-function integrands."""

    def test_indicator(self, unit_grid):
        """Indicator boxes are built from lattice corners."""
        phi = StepFunction.indicator(unit_grid, (0.0, 0.25), (0.5, 1.0))

        assert phi.coefficients.sum() == 2 * 3
        assert phi.coefficients[0, 0] == 0.0
        assert phi.coefficients[1, 3] == 1.0

    def test_indicator_off_lattice(self, unit_grid):
        """Corners must be lattice points."""
        with pytest.raises(ValueError):
            StepFunction.indicator(unit_grid, (0.0, 0.1), (1.0, 1.0))

    def test_linear_combination(self, unit_grid):
        """Sums and scalar multiples act on coefficients."""
        phi = StepFunction.indicator(unit_grid, (0.0, 0.0), (1.0, 1.0))

        combined = 2.0 * phi + phi
        assert np.all(combined.coefficients == 3.0)
        assert StepFunction.zeros(unit_grid).is_zero

    def test_shape_checked(self, unit_grid):
        """Coefficients live on cells."""
        with pytest.raises(ValueError):
            StepFunction(unit_grid, np.ones((5, 5)))


class TestInnerProduct:
    """Tests for the exact H inner product."""

    def test_unit_box_norm(self, unit_grid):
        """||1_[0,1]^2||_H^2 = 1 for every Hurst vector."""
        phi = StepFunction.indicator(unit_grid, (0.0, 0.0), (1.0, 1.0))

        result = h_norm_squared(phi, (0.7, 0.9))
        assert result.value == pytest.approx(1.0, abs=1e-12)
        assert result.quadrature_error_estimate < 1e-12

    def test_adjacent_boxes(self):
        """<1_[0,1]x[0,1], 1_[1,2]x[0,1]> = (2^1.5 - 2)/2 at H = 3/4."""
        grid = GridSpec(t_max=2.0, n_t=4, L=1.0, n_x=2)
        phi = StepFunction.indicator(grid, (0.0, 0.0), (1.0, 1.0))
        psi = StepFunction.indicator(grid, (1.0, 0.0), (2.0, 1.0))

        result = h_inner_product(phi, psi, (0.75, 0.75))
        assert result.value == pytest.approx((2**1.5 - 2) / 2, abs=1e-6)
        assert result.value == pytest.approx(0.414214, abs=1e-6)

    def test_matches_covariance_of_box(self):
        """The norm of 1_[0,t]x[0,x] is the sheet variance t^2H0 x^2H1."""
        grid = GridSpec(t_max=2.0, n_t=8, L=2.0, n_x=4)
        phi = StepFunction.indicator(grid, (0.0, 0.0), (1.5, 0.5))

        expected = 1.5 ** (2 * 0.8) * 0.5 ** (2 * 0.6)
        assert h_norm_squared(phi, (0.8, 0.6)).value == pytest.approx(expected)

    def test_symmetric(self, unit_grid):
        """<phi, psi> = <psi, phi>."""
        rng = np.random.default_rng(0)
        phi = StepFunction(unit_grid, rng.standard_normal((4, 4)))
        psi = StepFunction(unit_grid, rng.standard_normal((4, 4)))

        a = h_inner_product(phi, psi, (0.7, 0.8)).value
        b = h_inner_product(psi, phi, (0.7, 0.8)).value
        assert a == pytest.approx(b)

    def test_rough_hurst_rejected(self, unit_grid):
        """Every H must exceed 1/2."""
        phi = StepFunction.zeros(unit_grid)

        with pytest.raises(DomainError):
            h_norm_squared(phi, (0.5, 0.7))

    def test_grid_mismatch(self, unit_grid):
        """Integrands on different grids cannot be paired."""
        phi = StepFunction.zeros(unit_grid)
        psi = StepFunction.zeros(unit_grid.model_copy(update={"n_x": 2}))

        with pytest.raises(GridMismatchError):
            h_inner_product(phi, psi, (0.7, 0.7))
        with pytest.raises(GridMismatchError):
            h_norm_squared(phi, (0.7, 0.7, 0.7))

    @given(
        coefficients=arrays(
            np.float64, (3, 3), elements=st.floats(min_value=-10.0, max_value=10.0)
        ),
        h0=st.floats(min_value=0.51, max_value=0.99),
        h1=st.floats(min_value=0.51, max_value=0.99),
    )
    @settings(max_examples=60, deadline=None)
    def test_norm_non_negative(self, coefficients, h0, h1):
        """The H norm is non-negative for every integrand."""
        grid = GridSpec(t_max=1.0, n_t=3, L=1.0, n_x=3)

        assert h_norm_squared(StepFunction(grid, coefficients), (h0, h1)).value >= 0.0

    @given(
        data=arrays(np.float64, (3, 3, 3), elements=st.floats(min_value=-1.0, max_value=1.0)),
        a=st.floats(min_value=-2.0, max_value=2.0),
        b=st.floats(min_value=-2.0, max_value=2.0),
        h0=st.floats(min_value=0.51, max_value=0.99),
        h1=st.floats(min_value=0.51, max_value=0.99),
    )
    @settings(max_examples=60, deadline=None)
    def test_bilinear(self, data, a, b, h0, h1):
        """<a phi + b chi, psi> = a <phi, psi> + b <chi, psi>."""
        grid = GridSpec(t_max=1.0, n_t=3, L=1.0, n_x=3)
        phi, chi, psi = (StepFunction(grid, c) for c in data)
        hurst = (h0, h1)

        combined = h_inner_product(a * phi + b * chi, psi, hurst).value
        expected = (
            a * h_inner_product(phi, psi, hurst).value
            + b * h_inner_product(chi, psi, hurst).value
        )
        assert combined == pytest.approx(expected, abs=1e-12)

    @given(
        data=arrays(np.float64, (2, 3, 3), elements=st.floats(min_value=-10.0, max_value=10.0)),
        h0=st.floats(min_value=0.51, max_value=0.99),
        h1=st.floats(min_value=0.51, max_value=0.99),
    )
    @settings(max_examples=60, deadline=None)
    def test_cauchy_schwarz(self, data, h0, h1):
        """<phi, psi>^2 <= ||phi||^2 ||psi||^2."""
        grid = GridSpec(t_max=1.0, n_t=3, L=1.0, n_x=3)
        phi, psi = (StepFunction(grid, c) for c in data)
        hurst = (h0, h1)

        inner = h_inner_product(phi, psi, hurst).value
        bound = h_norm_squared(phi, hurst).value * h_norm_squared(psi, hurst).value
        assert inner**2 <= bound * (1 + 1e-9) + 1e-12

    @given(
        coefficients=arrays(
            np.float64, (3, 3), elements=st.floats(min_value=-10.0, max_value=10.0)
        ),
        h0=st.floats(min_value=0.51, max_value=0.99),
        h1=st.floats(min_value=0.51, max_value=0.99),
    )
    @settings(max_examples=60, deadline=None)
    def test_equal_integrands_pair_like_a_norm(self, coefficients, h0, h1):
        """Two distinct but equal step functions pair exactly like a norm."""
        grid = GridSpec(t_max=1.0, n_t=3, L=1.0, n_x=3)
        phi = StepFunction(grid, coefficients)
        psi = StepFunction(grid, coefficients.copy())

        pair = h_inner_product(phi, psi, (h0, h1))
        assert pair.value >= 0.0
        assert pair.value == h_norm_squared(phi, (h0, h1)).value


class TestIntegral:
    """Tests for integrals against sampled sheets."""

    def test_rectangular_increments_telescope(self):
        """Increments of a sheet sum back to its far corner."""
        values = np.random.default_rng(1).standard_normal((5, 5))
        values[0] = 0.0
        values[:, 0] = 0.0

        assert rectangular_increments(values).sum() == pytest.approx(values[-1, -1])

    def test_full_box_integral_is_corner_value(self, params, unit_grid):
        """int 1_[0,1]^2 dZ = Z(1, 1)."""
        sheet = sample_sheet(params, unit_grid, SeedSpec(master_seed=3))
        phi = StepFunction.indicator(unit_grid, (0.0, 0.0), (1.0, 1.0))

        assert integrate_step(phi, sheet) == pytest.approx(sheet.values[-1, -1])

    def test_grid_mismatch(self, params, unit_grid):
        """The integrand and the sheet share a grid."""
        sheet = sample_sheet(params, unit_grid, SeedSpec())
        phi = StepFunction.zeros(unit_grid.model_copy(update={"t_max": 2.0}))

        with pytest.raises(GridMismatchError):
            integrate_step(phi, sheet)

    def test_z_score(self):
        """0/0 reads as agreement, x/0 as infinitely far."""
        assert z_score(1.0, 0.5, 0.25) == pytest.approx(2.0)
        assert z_score(1.0, 1.0, 0.0) == 0.0
        assert z_score(0.0, 1.0, 0.0) == -math.inf

    def test_isometry_holds(self, params, unit_grid):
        """Second moment of the integral matches the H norm."""
        phi = StepFunction.indicator(unit_grid, (0.0, 0.0), (0.5, 1.0))

        report = isometry_report(phi, params, 3000, SeedSpec(master_seed=21))
        assert report.h_norm == pytest.approx(0.5**1.5)
        assert abs(report.z_score) < 4.0
        assert report.n_samples == 3000

    def test_zero_integrand(self, params, unit_grid):
        """The zero integrand gives an exact zero report."""
        report = isometry_report(StepFunction.zeros(unit_grid), params, 10, SeedSpec())

        assert report.empirical_second_moment == 0.0
        assert report.z_score == 0.0
        assert report.passed

    def test_needs_two_samples(self, params, unit_grid):
        """The standard error needs at least two samples."""
        with pytest.raises(ValueError):
            isometry_report(StepFunction.zeros(unit_grid), params, 1, SeedSpec())


class TestCapitalI:
    """Tests for the stochastic convolution integral I(t)."""

    @staticmethod
    def closed_form(t: float, params: HermiteParams) -> float:
        h0, h1 = params.hurst
        kappa = h1 - 1.0
        spatial = (4.0 * params.nu) ** (h1 - 1.0) * gamma(h1 - 0.5) / math.sqrt(math.pi)
        inner, _ = quad(
            lambda w: (1.0 + w) ** kappa, 0.0, 1.0, weight="alg", wvar=(0.0, 2 * h0 - 2)
        )
        power = 2 * h0 + kappa
        return 2.0 * spatial * t**power / power * inner

    def test_matches_reference(self, params):
        """Graded quadrature agrees with a one-dimensional reference."""
        result = capital_I(1.0, params)

        assert result.converged
        assert not result.divergence_flag
        assert result.value == pytest.approx(self.closed_form(1.0, params), rel=0.03)

    def test_increasing_in_time(self, params):
        """I(t) grows with t."""
        assert capital_I(0.5, params).value < capital_I(1.0, params).value

    def test_requires_positive_time(self, params):
        """t must be positive."""
        with pytest.raises(DomainError):
            capital_I(0.0, params)

    def test_divergence_flagged(self):
        """Outside the admissible region a DivergenceWarning is emitted."""
        params = HermiteParams(q=2, hurst=(0.51, 0.51, 0.51), d=2)

        with pytest.warns(DivergenceWarning):
            result = capital_I(1.0, params)
        assert result.divergence_flag
        assert not result.accepted

    def test_rough_space_is_infinite(self):
        """A spatial H at or below 1/2 makes the spatial factor infinite."""
        params = HermiteParams(q=1, hurst=(0.9, 0.5), d=1)

        with pytest.warns(DivergenceWarning):
            result = capital_I(1.0, params)
        assert math.isinf(result.value)

    def test_graded_rule_integrates_polynomials(self):
        """The composite rule is exact for low-degree polynomials."""
        x, w = graded_rule(4, 8, 0.15)

        assert w.sum() == pytest.approx(1.0)
        assert float(w @ x**3) == pytest.approx(0.25)
        x1, w1 = graded_rule(4, 8, 0.15, toward_one=True)
        assert float(w1 @ x1) == pytest.approx(0.5)

    def test_result_serializes(self, params):
        """to_dict carries the convergence diagnostics."""
        data = capital_I(1.0, params, QuadratureSpec(rtol=0.05)).to_dict()

        assert {"value", "converged", "divergence_flag", "accepted"} <= set(data)
