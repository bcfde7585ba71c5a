"""
Tests for the dyadic Littlewood-Paley machinery.

Validates:
- Cutoff profile shape
- Partition of unity and exact reconstruction
- P~ P = P idempotence
- Dyadic preconditions
"""
import numpy as np
import pytest

from lib.errors import PreconditionError
from lib.spectral import DyadicBand, Field, Grid3D, beta, chi, cutoff_profile, project, resolved_bands
from lib.spectral.littlewood_paley import (
    decompose,
    homogeneous_bands,
    partition_of_unity_defect,
    reconstruct,
    top_scale,
)
from tests.helpers import random_field


class TestCutoffProfile:
    def test_flat_and_vanishing_regions(self):
        s = np.array([0.0, 0.5, 1.0, -1.0, 2.0, 3.0, -2.5])
        np.testing.assert_array_equal(cutoff_profile(s), [1, 1, 1, 1, 0, 0, 0])

    def test_monotone_transition(self):
        s = np.linspace(1.0, 2.0, 101)
        values = cutoff_profile(s)
        assert np.all(np.diff(values) <= 0)
        assert 0 < cutoff_profile(np.array(1.5)) < 1

    def test_chi_support(self):
        s = np.array([0.4, 0.5, 1.0, 2.0, 2.1])
        values = chi(1.0, s)
        assert values[0] == 0 and values[1] == 0
        assert values[-1] == 0 and values[-2] == 0
        assert values[2] > 0


class TestPartition:
    @pytest.mark.parametrize('N0', [0.5, 1.0, 2.0])
    def test_partition_of_unity(self, N0):
        grid = Grid3D(32, 16.0)
        assert partition_of_unity_defect(grid, N0) < 1e-12

    def test_bands_cover_lattice(self):
        grid = Grid3D(32, 16.0)
        bands = resolved_bands(grid, 1.0)
        assert bands[0].scale == 1.0
        assert bands[-1].scale == top_scale(grid, 1.0)
        assert top_scale(grid, 1.0) >= grid.max_lattice_frequency

    def test_reconstruction(self, smooth_field):
        total = reconstruct(decompose(smooth_field, 0.5))
        assert (total - smooth_field).l2_norm() < 1e-12 * smooth_field.l2_norm()

    def test_homogeneous_bands_are_dyadic(self, small_grid):
        scales = [band.scale for band in homogeneous_bands(small_grid)]
        assert all(np.log2(s) == round(np.log2(s)) for s in scales)
        assert scales[-1] >= small_grid.max_lattice_frequency


class TestProjection:
    @pytest.mark.parametrize('band', [
        DyadicBand.homogeneous(1.0),
        DyadicBand.inhomogeneous(2.0, 1.0),
        DyadicBand.inhomogeneous(1.0, 1.0),
    ])
    def test_widened_idempotence(self, smooth_field, band):
        piece = project(smooth_field, band)
        again = project(piece, band.widen())
        assert (again - piece).l2_norm() <= 1e-12 * smooth_field.l2_norm()

    def test_projection_keeps_representation(self, smooth_field):
        piece = project(smooth_field.spectral(), DyadicBand.homogeneous(1.0))
        assert piece.is_spectral

    def test_band_above_lattice_is_zero(self, smooth_field):
        piece = project(smooth_field, DyadicBand.homogeneous(1024.0))
        assert piece.l2_norm() == 0

    def test_edges(self):
        band = DyadicBand.homogeneous(4.0)
        assert (band.lower_edge, band.upper_edge) == (2.0, 8.0)
        assert (band.widen().lower_edge, band.widen().upper_edge) == (1.0, 16.0)
        low = DyadicBand.inhomogeneous(1.0, 1.0)
        assert low.lower_edge == 0.0


class TestAlmostOrthogonality:
    @pytest.mark.parametrize('pair', [(1.0, 4.0), (0.5, 4.0), (2.0, 0.5)])
    def test_separated_bands_are_orthogonal(self, small_grid, rng, pair):
        f = random_field(small_grid, rng)
        g = random_field(small_grid, rng)
        a = project(f, DyadicBand.homogeneous(pair[0]))
        b = project(g, DyadicBand.homogeneous(pair[1]))
        assert abs(a.inner(b)) <= 1e-14 * f.l2_norm() * g.l2_norm()

    def test_neighbouring_bands_overlap(self, smooth_field):
        a = project(smooth_field, DyadicBand.homogeneous(1.0))
        b = project(smooth_field, DyadicBand.homogeneous(2.0))
        assert abs(a.inner(b)) > 0

    def test_square_sum_is_comparable_to_mass(self, smooth_field):
        """(1/2)||f||^2 <= sum_N ||P_N f||^2 <= ||f||^2 with at most two bands overlapping."""
        pieces = decompose(smooth_field, 0.5)
        square_sum = sum(piece.l2_norm() ** 2 for piece in pieces)
        total = smooth_field.l2_norm() ** 2
        assert 0.5 * total <= square_sum <= total * (1.0 + 1e-12)
        assert reconstruct(pieces).l2_norm() ** 2 == pytest.approx(total, rel=1e-12)


class TestPreconditions:
    def test_non_dyadic_scale(self):
        with pytest.raises(PreconditionError, match="dyadic"):
            DyadicBand.homogeneous(3.0)

    def test_band_below_N0(self):
        with pytest.raises(PreconditionError, match="below N0"):
            beta(0.5, np.array([1.0]), N0=1.0)

    def test_inhomogeneous_below_N0(self):
        with pytest.raises(PreconditionError):
            DyadicBand.inhomogeneous(0.25, 1.0)

    def test_low_band_is_lumped(self):
        s = np.array([0.0, 0.1, 0.9])
        np.testing.assert_array_equal(beta(1.0, s, N0=1.0), [1.0, 1.0, 1.0])

    def test_zero_field_projects_to_zero(self, small_grid):
        assert project(Field.zeros(small_grid), DyadicBand.homogeneous(1.0)).l2_norm() == 0
