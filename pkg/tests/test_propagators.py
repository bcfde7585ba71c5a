"""
Tests for the free flows and the Strichartz probes.

Validates:
- Unitarity, group property and inverse of exp(-it Lambda_m)
- Dirac projector identities and the free Dirac flow
- Probe preconditions, fitted slopes and the boundary wrap guard
"""
import numpy as np
import pytest

from lib.errors import PreconditionError
from lib.propagators import (
    DiracData,
    DispersionRelation,
    besov_strichartz_probe,
    dirac_free_evolve,
    dirac_projector,
    dirac_split,
    free_evolve,
    free_samples,
)
from lib.propagators.dirac import dirac_bracket, dirac_hamiltonian_symbol, projection_norm_ratio, random_spinor
from lib.propagators.strichartz import (
    angular_strichartz_probe,
    angular_threshold,
    band_data,
    low_band_strichartz_check,
)
from lib.spectral import DyadicBand, Grid3D


class TestFreeFlow:
    def test_unitarity(self, smooth_field):
        evolved = free_evolve(smooth_field, 0.7, 1.0)
        assert evolved.l2_norm() == pytest.approx(smooth_field.l2_norm(), rel=1e-12)

    def test_group_property(self, smooth_field):
        two_steps = free_evolve(free_evolve(smooth_field, 0.3, 1.0), 1.1, 1.0)
        one_step = free_evolve(smooth_field, 1.4, 1.0)
        assert (two_steps - one_step).l2_norm() <= 1e-12 * smooth_field.l2_norm()

    def test_inverse(self, smooth_field):
        back = free_evolve(free_evolve(smooth_field, 2.0, 0.5), -2.0, 0.5)
        assert (back - smooth_field).l2_norm() <= 1e-12 * smooth_field.l2_norm()

    def test_zero_time_is_identity(self, smooth_field):
        assert free_evolve(smooth_field, 0.0) is smooth_field

    def test_keeps_representation(self, smooth_field):
        assert free_evolve(smooth_field.spectral(), 0.5).is_spectral
        assert not free_evolve(smooth_field, 0.5).is_spectral

    def test_samples_are_physical(self, smooth_field):
        samples = free_samples(smooth_field, [0.0, 0.5, 1.0])
        assert len(samples) == 3
        assert not any(u.is_spectral for u in samples)

    def test_dispersion(self):
        relation = DispersionRelation(4.0)
        assert relation.omega(np.array(3.0)) == pytest.approx(np.sqrt(13.0))

    def test_mass_must_be_positive(self, smooth_field):
        with pytest.raises(PreconditionError, match="mass"):
            free_evolve(smooth_field, 1.0, 0.0)


class TestDiracSymbols:
    @pytest.fixture
    def points(self, rng):
        return rng.normal(scale=3.0, size=(20, 3))

    def test_projectors_split_identity(self, points):
        for xi in points:
            total = dirac_projector(xi, 1.0, +1) + dirac_projector(xi, 1.0, -1)
            np.testing.assert_allclose(total, np.eye(4), atol=1e-12)

    def test_projectors_idempotent_and_orthogonal(self, points):
        for xi in points:
            plus = dirac_projector(xi, 1.0, +1)
            minus = dirac_projector(xi, 1.0, -1)
            np.testing.assert_allclose(plus @ plus, plus, atol=1e-12)
            np.testing.assert_allclose(plus @ minus, np.zeros((4, 4)), atol=1e-12)

    def test_hamiltonian_spectral_form(self, points):
        for xi in points:
            H = dirac_hamiltonian_symbol(xi, 1.0)
            split = dirac_bracket(xi, 1.0) * (dirac_projector(xi, 1.0, +1) - dirac_projector(xi, 1.0, -1))
            np.testing.assert_allclose(H, split, atol=1e-12)

    def test_sign_validated(self):
        with pytest.raises(PreconditionError, match="sign"):
            dirac_projector([0.0, 0.0, 1.0], 1.0, 0)


class TestDiracFlow:
    @pytest.fixture
    def spinor(self, small_grid, rng) -> DiracData:
        return random_spinor(small_grid, 1.0, rng)

    def test_split_reassembles(self, spinor):
        plus, minus = dirac_split(spinor)
        assert ((plus + minus) - spinor).l2_norm() <= 1e-12 * spinor.l2_norm()

    def test_split_is_orthogonal(self, spinor):
        plus, minus = dirac_split(spinor)
        assert plus.charge() + minus.charge() == pytest.approx(spinor.charge(), rel=1e-12)

    def test_charge_conserved(self, spinor):
        evolved = dirac_free_evolve(spinor, 1.3)
        assert evolved.charge() == pytest.approx(spinor.charge(), rel=1e-12)

    def test_positive_part_follows_semirelativistic_flow(self, spinor):
        """On Pi_+ data the Dirac flow is exp(-it <xi>) with <xi>^2 = m^2 + |xi|^2."""
        plus, _ = dirac_split(spinor)
        evolved = dirac_free_evolve(plus, 0.9)
        for a in range(4):
            expected = free_evolve(plus.components[a], 0.9, plus.m ** 2)
            assert (evolved.components[a] - expected).l2_norm() <= 1e-12 * spinor.l2_norm()

    def test_projection_norm_ratio_range(self, spinor):
        ratio = projection_norm_ratio(spinor, 0.3)
        assert 1.0 - 1e-12 <= ratio <= 2.0 + 1e-12


class TestStrichartzProbes:
    def test_band_data_is_normalized(self, small_grid, rng):
        data = band_data(small_grid, DyadicBand.homogeneous(1.0), rng)
        assert data.l2_norm() == pytest.approx(1.0)

    def test_besov_pair_must_be_admissible(self, small_grid):
        with pytest.raises(PreconditionError, match="admissible"):
            besov_strichartz_probe(small_grid, 1.0, [1.0, 2.0], 2.0, 4.0)

    def test_angular_exponent_excludes_four(self, small_grid):
        with pytest.raises(PreconditionError, match="10/3"):
            angular_strichartz_probe(small_grid, 1.0, [1.0, 2.0], 4.0)

    def test_needs_two_bands(self, small_grid):
        with pytest.raises(PreconditionError, match="two bands"):
            besov_strichartz_probe(small_grid, 1.0, [1.0], 2.0, 6.0)

    def test_wrap_detected(self):
        grid = Grid3D(16, 8.0)
        with pytest.raises(PreconditionError, match="window too short"):
            besov_strichartz_probe(grid, 1.0, [1.0, 2.0], 2.0, 6.0, ensemble=1, samples=4, window=100.0)

    def test_besov_fit_reports_slope(self):
        grid = Grid3D(32, 8.0)
        report = besov_strichartz_probe(grid, 1.0, [1.0, 2.0, 4.0], 2.0, 6.0, ensemble=2, seed=3,
                                        samples=8, window=0.5, wrap_tolerance=1.0)
        assert report.probe == 'besov'
        assert len(report.ratio_max) == 3
        assert all(value > 0 for value in report.ratio_max)
        assert np.isfinite(report.slope) and np.isfinite(report.stderr)
        assert report.threshold == pytest.approx(5.0 / 6.0 + 0.1)
        assert report.passed == (report.slope <= report.threshold)
        assert len(report.to_frame()) == 3

    def test_angular_fit_reports_slope(self):
        grid = Grid3D(32, 8.0)
        report = angular_strichartz_probe(grid, 1.0, [1.0, 2.0, 4.0], 3.6, ensemble=2, seed=3, samples=8,
                                          window=0.5, N0=1.0, wrap_tolerance=1.0)
        assert report.probe == 'angular'
        assert all(value > 0 for value in report.ratio_max)
        assert np.isfinite(report.slope)
        assert report.threshold == pytest.approx(angular_threshold(3.6) + 0.1)

    def test_angular_thresholds(self):
        assert angular_threshold(3.6) == pytest.approx(1.0 / 3.6)
        assert angular_threshold(4.5) == pytest.approx(1.0 - 3.0 / 4.5)

    def test_low_band_constant_is_scale_free(self, small_grid):
        unit = low_band_strichartz_check(small_grid, 1.0, N0=1.0, ensemble=3, seed=2, samples=16,
                                         wrap_tolerance=1.0)
        tiny = low_band_strichartz_check(small_grid, 1.0, N0=1.0, ensemble=3, seed=2, samples=16,
                                         amplitude=1e-3, wrap_tolerance=1.0)
        assert len(unit.constants) == 3
        assert all(c > 0 for c in unit.constants)
        np.testing.assert_allclose(tiny.constants, unit.constants, rtol=1e-10)
