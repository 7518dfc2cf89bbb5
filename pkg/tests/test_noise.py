"""
Tests for lattices, seeds, samplers and field persistence.
"""

import numpy as np
import pytest
import scipy.stats as sps

from hermburg.analysis.moments import excess_kurtosis
from hermburg.analysis.scaling import ks_compare, probe_indices
from hermburg.core.errors import GridMismatchError, InfeasibleSizeError
from hermburg.core.jackknife import jackknife_mean_se
from hermburg.kernels.covariance import sheet_covariance
from hermburg.kernels.params import HermiteParams
from hermburg.noise.exact import sample_fbm_sheet_exact
from hermburg.noise.fieldio import (
    FieldFormatError,
    decode_field,
    encode_field,
    read_field,
    write_field,
    write_field_csv,
)
from hermburg.noise.grid import FieldKind, FieldSample, GridSpec, SeedSpec
from hermburg.noise.hermite import hermite_poly
from hermburg.noise.kernel_sampler import TruncationSpec, sample_hermite_sheet_kernel
from hermburg.noise.ncl import sample_hermite_sheet_ncl
from hermburg.noise.sampling import (
    SamplerKind,
    resolve_sampler,
    sample_sheet,
    sample_sheet_ensemble,
    stack_values,
)
from hermburg.noise.white import sample_white_noise


class TestGridSpec:
    """Tests for the space-time lattice."""

    def test_extents(self, unit_grid):
        """Sheets live on vertices, white noise on cells, solutions on the torus."""
        assert unit_grid.extent(FieldKind.SHEET) == (5, 5)
        assert unit_grid.extent(FieldKind.WHITE_NOISE) == (4, 4)
        assert unit_grid.extent(FieldKind.SOLUTION) == (5, 4)

    def test_lattice_index(self, unit_grid):
        """Points on the lattice map to indices, others to None."""
        assert unit_grid.lattice_index((0.5, 0.75)) == (2, 3)
        assert unit_grid.lattice_index((0.3, 0.5)) is None
        assert unit_grid.lattice_index((1.25, 0.5)) is None

    def test_scaled(self, unit_grid):
        """Stretching multiplies the extents, not the counts."""
        stretched = unit_grid.scaled((4.0, 2.0))

        assert stretched.t_max == pytest.approx(4.0)
        assert stretched.L == pytest.approx(2.0)
        assert stretched.n_t == unit_grid.n_t

    def test_scaled_needs_equal_spatial_factors(self):
        """A single L is shared by every spatial axis."""
        grid = GridSpec(d=2)

        with pytest.raises(ValueError):
            grid.scaled((1.0, 2.0, 3.0))

    def test_require_same(self, unit_grid):
        """Different lattices raise GridMismatchError."""
        with pytest.raises(GridMismatchError):
            unit_grid.require_same(unit_grid.model_copy(update={"n_x": 8}))


class TestSeedSpec:
    """Tests for reproducible streams."""

    def test_same_seed_same_stream(self):
        """Equal specs give equal draws."""
        a = SeedSpec(master_seed=3).generator().standard_normal(5)
        b = SeedSpec(master_seed=3).generator().standard_normal(5)

        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        """Different stream indices give different draws."""
        a = SeedSpec(master_seed=3, stream_index=0).generator().standard_normal(5)
        b = SeedSpec(master_seed=3, stream_index=1).generator().standard_normal(5)

        assert not np.array_equal(a, b)

    def test_spawn_extends_path(self):
        """Children append to the path."""
        child = SeedSpec().spawn(2).spawn(5)

        assert child.path == (2, 5)
        with pytest.raises(ValueError):
            SeedSpec().spawn(-1)


class TestFieldSample:
    """Tests for realized fields."""

    def test_shape_checked(self, unit_grid):
        """Values must match the extent of the kind."""
        with pytest.raises(GridMismatchError):
            FieldSample(unit_grid, np.zeros((4, 4)), SeedSpec(), FieldKind.SHEET)

    def test_non_finite_rejected(self, unit_grid):
        """NaN values are rejected."""
        values = np.zeros((5, 5))
        values[1, 1] = np.nan

        with pytest.raises(ValueError):
            FieldSample(unit_grid, values, SeedSpec(), FieldKind.SHEET)

    def test_at_lattice_point(self, unit_grid):
        """at() reads a vertex by coordinates."""
        values = np.arange(25.0).reshape(5, 5)
        sample = FieldSample(unit_grid, values, SeedSpec(), FieldKind.SHEET)

        assert sample.at((0.25, 0.5)) == 7.0
        with pytest.raises(ValueError):
            sample.at((0.1, 0.5))


class TestHermitePolynomials:
    """Tests for He_q."""

    def test_low_orders(self):
        """He_1 = x, He_2 = x^2 - 1, He_3 = x^3 - 3x."""
        assert hermite_poly(1, 3.0) == pytest.approx(3.0)
        assert hermite_poly(2, 3.0) == pytest.approx(8.0)
        assert hermite_poly(3, 2.0) == pytest.approx(2.0)

    def test_degree_zero_rejected(self):
        """Degree must be at least one."""
        with pytest.raises(ValueError):
            hermite_poly(0, 1.0)


class TestWhiteNoise:
    """Tests for cell white noise."""

    def test_shape_and_determinism(self, unit_grid):
        """One increment per cell; same seed, same field."""
        a = sample_white_noise(unit_grid, SeedSpec(master_seed=1))
        b = sample_white_noise(unit_grid, SeedSpec(master_seed=1))

        assert a.kind == FieldKind.WHITE_NOISE
        assert a.values.shape == (4, 4)
        np.testing.assert_array_equal(a.values, b.values)

    def test_variance_is_cell_volume(self):
        """Each increment has variance dt dx."""
        grid = GridSpec(t_max=1.0, n_t=100, L=1.0, n_x=100)
        values = sample_white_noise(grid, SeedSpec(master_seed=4)).values

        assert values.var() == pytest.approx(grid.cell_volume, rel=0.05)


class TestExactSampler:
    """Tests for the exact q = 1 sheet."""

    def test_vanishes_on_axes(self, unit_grid):
        """Z = 0 whenever a coordinate is 0."""
        sheet = sample_fbm_sheet_exact((0.75, 0.75), unit_grid, SeedSpec())

        assert np.all(sheet.values[0] == 0)
        assert np.all(sheet.values[:, 0] == 0)
        assert sheet.params.q == 1

    def test_unit_variance_at_unit_point(self, unit_grid):
        """E[Z(1,1)^2] = 1."""
        seed = SeedSpec(master_seed=11)
        corner = np.array(
            [
                sample_fbm_sheet_exact((0.7, 0.8), unit_grid, seed.spawn(i)).values[-1, -1]
                for i in range(4000)
            ]
        )

        assert np.mean(corner**2) == pytest.approx(1.0, abs=0.1)

    def test_infeasible_size(self):
        """Lattices beyond the exact limit are refused."""
        grid = GridSpec(t_max=1.0, n_t=5000, L=1.0, n_x=1)

        with pytest.raises(InfeasibleSizeError):
            sample_fbm_sheet_exact((0.75, 0.75), grid, SeedSpec())

    def test_hurst_length_checked(self, unit_grid):
        """The Hurst vector must match the grid dimension."""
        with pytest.raises(GridMismatchError):
            sample_fbm_sheet_exact((0.75, 0.75, 0.75), unit_grid, SeedSpec())


class TestHermiteSamplers:
    """Tests for the q >= 2 constructions."""

    def test_kernel_sampler_sheet(self, unit_grid):
        """Kernel sheets are finite, zero on the axes and reproducible."""
        params = HermiteParams(q=2, hurst=(0.75, 0.75), d=1)
        trunc = TruncationSpec(refine=2, calibration_batch=200)

        a = sample_hermite_sheet_kernel(params, unit_grid, trunc, SeedSpec(master_seed=5))
        b = sample_hermite_sheet_kernel(params, unit_grid, trunc, SeedSpec(master_seed=5))

        assert a.values.shape == (5, 5)
        assert np.all(a.values[0] == 0) and np.all(a.values[:, 0] == 0)
        np.testing.assert_array_equal(a.values, b.values)

    def test_ncl_sampler_sheet(self, unit_grid):
        """ncl sheets are finite, zero on the axes and reproducible."""
        params = HermiteParams(q=2, hurst=(0.75, 0.75), d=1)

        a = sample_hermite_sheet_ncl(params, unit_grid, 32, SeedSpec(master_seed=5))
        b = sample_hermite_sheet_ncl(params, unit_grid, 32, SeedSpec(master_seed=5))

        assert a.values.shape == (5, 5)
        assert np.all(a.values[0] == 0) and np.all(a.values[:, 0] == 0)
        np.testing.assert_array_equal(a.values, b.values)


class TestSampling:
    """Tests for sampler dispatch and ensembles."""

    def test_resolve_sampler(self):
        """AUTO picks the exact sampler only for q = 1."""
        assert resolve_sampler(SamplerKind.AUTO, 1) == SamplerKind.EXACT
        assert resolve_sampler(SamplerKind.AUTO, 2) == SamplerKind.KERNEL
        assert resolve_sampler(SamplerKind.NCL, 1) == SamplerKind.NCL
        with pytest.raises(ValueError):
            resolve_sampler(SamplerKind.EXACT, 2)

    def test_sample_sheet_records_model(self, params, unit_grid):
        """The exact path attaches the full model, viscosity included."""
        sheet = sample_sheet(params, unit_grid, SeedSpec())

        assert sheet.params == params

    def test_ensemble_independent_of_threads(self, params, unit_grid):
        """Member i is drawn from spawn(i) whatever the worker count."""
        seed = SeedSpec(master_seed=9)
        serial = stack_values(sample_sheet_ensemble(params, unit_grid, seed, 12, threads=1))
        parallel = stack_values(sample_sheet_ensemble(params, unit_grid, seed, 12, threads=4))

        np.testing.assert_array_equal(serial, parallel)

    def test_ensemble_members_differ(self, params, unit_grid):
        """Distinct members come from distinct streams."""
        sheets = sample_sheet_ensemble(params, unit_grid, SeedSpec(), 2)

        assert not np.array_equal(sheets[0].values, sheets[1].values)

    def test_stack_values_checks_grids(self, params, unit_grid):
        """Mixed grids cannot be stacked."""
        a = sample_sheet(params, unit_grid, SeedSpec())
        b = sample_sheet(params, unit_grid.model_copy(update={"n_x": 2}), SeedSpec())

        with pytest.raises(GridMismatchError):
            stack_values([a, b])
        with pytest.raises(ValueError):
            stack_values([])


class TestFieldIO:
    """Tests for the HBF1 format and CSV export."""

    def test_header_round_trip(self, params, unit_grid, temp_dir):
        """q and the Hurst vector survive a write/read cycle exactly."""
        sheet = sample_sheet(params, unit_grid, SeedSpec(master_seed=2))
        path = write_field(sheet, temp_dir / "sheet.hbf")

        loaded = read_field(path)
        assert loaded.kind == FieldKind.SHEET
        assert loaded.grid == unit_grid
        assert loaded.params.q == 1
        assert loaded.params.hurst == (0.75, 0.75)
        np.testing.assert_array_equal(loaded.values, sheet.values)

    def test_kind_inferred_from_size(self, unit_grid):
        """A solution field is recognized by its value count."""
        solution = FieldSample(unit_grid, np.ones((5, 4)), SeedSpec(), FieldKind.SOLUTION)

        assert decode_field(encode_field(solution)).kind == FieldKind.SOLUTION

    def test_white_noise_has_no_model(self, unit_grid):
        """q = 0 in the header means no model."""
        noise = sample_white_noise(unit_grid, SeedSpec())

        assert decode_field(encode_field(noise)).params is None

    def test_bad_magic(self):
        """Foreign files are rejected."""
        with pytest.raises(FieldFormatError):
            decode_field(b"NOPE" + bytes(64))

    @pytest.mark.parametrize("cut", [3, 200])
    def test_truncated_file(self, params, unit_grid, cut):
        """A file cut inside the payload or the header is a format error."""
        data = encode_field(sample_sheet(params, unit_grid, SeedSpec()))

        with pytest.raises(FieldFormatError):
            decode_field(data[:-cut])
        with pytest.raises(FieldFormatError):
            decode_field(data[:40])

    def test_viscosity_passed_through(self, unit_grid, temp_dir):
        """The header has no viscosity; callers supply it."""
        params = HermiteParams(q=1, hurst=(0.75, 0.75), d=1, nu=0.3)
        path = write_field(sample_sheet(params, unit_grid, SeedSpec()), temp_dir / "s.hbf")

        assert read_field(path, nu=0.3).params.nu == pytest.approx(0.3)
        assert read_field(path).params.nu == HermiteParams(q=1, hurst=(0.75, 0.75), d=1).nu

    def test_csv_layout(self, params, unit_grid, temp_dir):
        """Header row, coordinates first, one row per vertex."""
        sheet = sample_sheet(params, unit_grid, SeedSpec())
        path = write_field_csv(sheet, temp_dir / "sheet.csv")

        lines = path.read_text().splitlines()
        assert lines[0] == "t,x1,value"
        assert len(lines) == 1 + 25
        t, x, value = (float(v) for v in lines[-1].split(","))
        assert (t, x) == (1.0, 1.0)
        assert value == sheet.values[-1, -1]


@pytest.mark.slow
class TestSamplerDistributions:
    """Large-ensemble checks of the sheet laws."""

    GRID = GridSpec(t_max=1.0, n_t=4, L=1.0, n_x=4, d=1)
    ROSENBLATT = HermiteParams(q=2, hurst=(0.75, 0.75), d=1)

    @pytest.fixture(scope="class")
    def kernel_values(self):
        """10000 kernel sheets of the second-order model."""
        sheets = sample_sheet_ensemble(
            self.ROSENBLATT, self.GRID, SeedSpec(master_seed=31), 10000, SamplerKind.KERNEL
        )
        return stack_values(sheets)

    def test_second_order_sheet_is_not_gaussian(self, kernel_values):
        """Excess kurtosis at (1, 1) is well away from 0."""
        estimate, se = excess_kurtosis(kernel_values[:, -1, -1])

        assert estimate > 3.0 * se

    def test_kernel_sheet_is_centred(self, kernel_values):
        """Each diagonal point has mean 0 within three standard errors."""
        for index in probe_indices(kernel_values.shape[1:], (1, 1)):
            values = kernel_values[(slice(None), *index)]
            assert abs(values.mean()) <= 3.0 * float(jackknife_mean_se(values))

    def test_kernel_covariance_shape(self, kernel_values):
        """Covariances relative to Var Z(1, 1) are within 10% of the closed form."""
        points = [(2, 2), (2, 4), (4, 2), (4, 4)]
        coords = [np.array(index) * 0.25 for index in points]
        flat = np.stack([kernel_values[(slice(None), *index)] for index in points], axis=1)
        empirical = np.cov(flat, rowvar=False)
        empirical = empirical / empirical[-1, -1]

        for a, t in enumerate(coords):
            for b, s in enumerate(coords):
                expected = sheet_covariance(t, s, self.ROSENBLATT.hurst)
                assert empirical[a, b] == pytest.approx(expected, rel=0.1)

    def test_ncl_matches_kernel(self, kernel_values):
        """Both second-order constructions give the same law at (1, 1)."""
        ncl = stack_values(
            sample_sheet_ensemble(
                self.ROSENBLATT, self.GRID, SeedSpec(master_seed=32), 1500, SamplerKind.NCL, m=128
            )
        )

        result = sps.ks_2samp(kernel_values[:, -1, -1], ncl[:, -1, -1])
        assert result.pvalue > 0.01

    @pytest.mark.parametrize("sampler", [SamplerKind.KERNEL, SamplerKind.NCL])
    def test_gaussian_sheet_matches_exact(self, sampler):
        """At q = 1 both constructions agree with the exact sampler on the diagonal."""
        params = HermiteParams(q=1, hurst=(0.75, 0.75), d=1)
        grid = GridSpec(t_max=1.0, n_t=8, L=1.0, n_x=8, d=1)
        exact = stack_values(
            sample_sheet_ensemble(params, grid, SeedSpec(master_seed=33), 1000, SamplerKind.EXACT)
        )
        other = stack_values(
            sample_sheet_ensemble(
                params,
                grid,
                SeedSpec(master_seed=34),
                1000,
                sampler,
                m=64,
            )
        )

        points = probe_indices(exact.shape[1:], (1, 1))
        _, p_values = ks_compare(exact, other, points, 1.0)
        assert len(points) == 5
        assert min(p_values) > 0.01 / len(points)
