"""
Tests for radial potentials.

Validates:
- Symbols and the zero-mode policy
- Parameter validation
- Derivative growth slopes
- Dyadic piece scaling, shell quadrature and tail mass
"""
import numpy as np
import pytest
from scipy.special import erfc

from lib.errors import DomainError, PreconditionError
from lib.potentials import (
    PotentialKind,
    PotentialSpec,
    adapted_grid,
    dyadic_piece,
    growth_check,
    kernel,
    kernel_piece,
    outside_mass_fraction,
    piece_scaling_fit,
    power_constant,
    shell_lp_norm,
    symbol,
)
from lib.spectral import Field, Grid3D
from tests.helpers import gaussian_field


class TestSymbols:
    def test_yukawa_symbol(self):
        spec = PotentialSpec(PotentialKind.YUKAWA, mu0=2.0)
        values = symbol(spec, np.array([[0.0, 0.0, 0.0], [3.0, 0.0, 4.0]]))
        np.testing.assert_allclose(values, [np.pi, 4.0 * np.pi / 29.0])

    def test_coulomb_zero_mode(self):
        spec = PotentialSpec(PotentialKind.COULOMB)
        values = symbol(spec, np.array([[0.0, 0.0, 0.0], [0.0, 2.0, 0.0]]))
        assert values[0] == 0.0
        assert values[1] == pytest.approx(np.pi)
        assert 'zero_mode' in spec.describe()

    def test_power_reduces_to_coulomb(self):
        """|x|^-1 has the Fourier constant 4 pi."""
        assert power_constant(1.0) == pytest.approx(4.0 * np.pi)

    def test_default_exponents(self):
        assert (PotentialSpec(PotentialKind.YUKAWA).gamma1, PotentialSpec(PotentialKind.YUKAWA).gamma2) == (0.0, 2.0)
        assert PotentialSpec(PotentialKind.COULOMB).gamma1 == 2.0
        power = PotentialSpec(PotentialKind.POWER, gamma=1.2)
        assert power.gamma1 == pytest.approx(1.8)

    def test_theorem_window(self):
        assert PotentialSpec(PotentialKind.YUKAWA).theorem_admissible()
        assert not PotentialSpec(PotentialKind.COULOMB).theorem_admissible()

    def test_kernel_is_real_spectral_field(self, small_grid):
        field = kernel(PotentialSpec(PotentialKind.YUKAWA), small_grid)
        assert field.is_spectral
        assert np.abs(field.values.imag).max() == 0

    def test_custom_non_finite_symbol(self):
        spec = PotentialSpec(PotentialKind.CUSTOM, gamma1=0.0, gamma2=2.0, rule=lambda s: 1.0 / (s - 1.0))
        with pytest.raises(DomainError, match="not finite"):
            symbol(spec, np.array([1.0, 0.0, 0.0]))


class TestValidation:
    def test_yukawa_mass_positive(self):
        with pytest.raises(PreconditionError, match="mu0"):
            PotentialSpec(PotentialKind.YUKAWA, mu0=0.0)

    def test_power_range(self):
        with pytest.raises(PreconditionError, match="gamma"):
            PotentialSpec(PotentialKind.POWER, gamma=3.5)

    def test_exponent_range(self):
        with pytest.raises(PreconditionError, match="gamma2"):
            PotentialSpec(PotentialKind.YUKAWA, gamma2=3.0)

    def test_custom_needs_rule(self):
        with pytest.raises(PreconditionError, match="rule"):
            PotentialSpec(PotentialKind.CUSTOM, gamma1=0.0, gamma2=2.0)


class TestGrowth:
    @pytest.mark.parametrize('k', [0, 1, 2])
    def test_yukawa_high_frequency_slope(self, k):
        report = growth_check(PotentialSpec(PotentialKind.YUKAWA), k)
        assert report.high_slope == pytest.approx(-(2.0 + k), abs=0.05)
        assert report.passed

    def test_coulomb_is_exact_power(self):
        report = growth_check(PotentialSpec(PotentialKind.COULOMB), 1)
        assert report.low_slope == pytest.approx(-3.0, abs=1e-3)
        assert report.high_slope == pytest.approx(-3.0, abs=1e-3)

    def test_order_range(self):
        with pytest.raises(PreconditionError, match="0..4"):
            growth_check(PotentialSpec(PotentialKind.YUKAWA), 5)

    def test_lattice_range_required(self):
        with pytest.raises(PreconditionError, match="insufficient lattice range"):
            growth_check(PotentialSpec(PotentialKind.YUKAWA), 0, grid=Grid3D(8, 8.0))


class TestScaling:
    def test_kernel_pieces_scale_exactly(self):
        """On adapted grids the kernel norms follow M^(3 - 3/p) exactly."""
        fit = piece_scaling_fit(PotentialSpec(PotentialKind.YUKAWA), 1.5, [4.0, 8.0, 16.0, 32.0], n=32)
        assert fit.kernel_slope == pytest.approx(fit.expected_kernel_slope, abs=1e-8)
        assert fit.expected_kernel_slope == pytest.approx(1.0)

    def test_yukawa_piece_slope(self):
        fit = piece_scaling_fit(PotentialSpec(PotentialKind.YUKAWA), 1.5, [4.0, 8.0, 16.0, 32.0], n=32)
        assert fit.expected_slope == pytest.approx(-1.0)
        assert abs(fit.slope - fit.expected_slope) <= 0.15

    def test_needs_four_bands(self):
        with pytest.raises(PreconditionError, match="at least 4"):
            piece_scaling_fit(PotentialSpec(PotentialKind.YUKAWA), 1.5, [2.0, 4.0], n=16)

    def test_unresolved_band(self):
        with pytest.raises(PreconditionError, match="Nyquist"):
            dyadic_piece(PotentialSpec(PotentialKind.YUKAWA), 16.0, Grid3D(16, 16.0))

    def test_adapted_grid_nyquist(self):
        grid = adapted_grid(8.0, 32)
        assert grid.xi_max == pytest.approx(32.0)


class TestPieceShape:
    def test_shell_quadrature_matches_lattice_norm(self):
        piece = dyadic_piece(PotentialSpec(PotentialKind.YUKAWA), 1.0, Grid3D(96, 32.0))
        assert shell_lp_norm(piece, 2.0) == pytest.approx(piece.lp_norm(2.0), rel=0.02)

    def test_gaussian_outside_mass(self):
        """The L^1 share of exp(-r^2/2) beyond R is a chi(3) tail."""
        R = 2.0
        exact = erfc(R / np.sqrt(2.0)) + np.sqrt(2.0 / np.pi) * R * np.exp(-R ** 2 / 2.0)
        f = gaussian_field(Grid3D(64, 16.0), 1.0)
        assert outside_mass_fraction(f, R) == pytest.approx(exact, abs=0.01)

    def test_tail_profile_is_scale_free(self):
        fractions = [outside_mass_fraction(kernel_piece(M, adapted_grid(M, 32)), 3.0 / M) for M in (2.0, 8.0)]
        assert fractions[0] == pytest.approx(fractions[1], abs=1e-10)
        near = outside_mass_fraction(kernel_piece(2.0, adapted_grid(2.0, 32)), 0.75)
        assert fractions[0] < near

    def test_zero_field_has_no_outside_mass(self, small_grid):
        assert outside_mass_fraction(Field.zeros(small_grid), 1.0) == 0.0
