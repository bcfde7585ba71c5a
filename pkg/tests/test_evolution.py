"""
Tests for the Hartree evolution.

Validates:
- Simulation config guards
- Nonlinearity consistency and conserved quantities
- Strang conservation and second-order self-convergence
- Duhamel-Picard contraction and its failure at large data
- Hartree-Dirac charge conservation
"""
import numpy as np
import pytest
from pydantic import ValidationError

from lib.angular import spherical_gradient
from lib.errors import NumericalFailure, PreconditionError
from lib.evolution import (
    SimulationConfig,
    duhamel_picard,
    energy,
    evolve,
    hartree_force,
    integrate,
    mass,
    self_convergence_order,
    strang_step,
    trilinear_force,
)
from lib.evolution import integrator
from lib.evolution.dirac_hartree import dirac_charge_drift
from lib.evolution.picard import difference_probe, footprint_bytes, free_iterate, sample_times
from lib.potentials import PotentialKind, PotentialSpec
from lib.propagators import free_evolve
from lib.propagators.dirac import random_spinor
from lib.spectral import Field, Grid3D
from tests.helpers import gaussian_field

SMALL = {'grid': {'n': 16, 'L': 16.0}, 'dt': 0.04, 'horizon': 1.0, 'stride': 5}


def small_config(**overrides) -> SimulationConfig:
    return SimulationConfig.model_validate({**SMALL, **overrides})


class TestSimulationConfig:
    def test_step_guard(self):
        with pytest.raises(ValidationError, match="reduce dt"):
            small_config(dt=0.2)

    def test_horizon_multiple_of_dt(self):
        with pytest.raises(ValidationError, match="multiple"):
            small_config(horizon=1.01)

    def test_unknown_key(self):
        with pytest.raises(ValidationError):
            small_config(gama2=1.0)

    def test_theorem_mode_rejects_coulomb(self):
        with pytest.raises(ValidationError, match="theorem mode"):
            small_config(theorem_mode=True, potential={'kind': 'coulomb'})

    def test_bad_grid(self):
        with pytest.raises(ValidationError, match="even"):
            small_config(grid={'n': 15, 'L': 8.0})

    def test_initial_amplitude_is_hs1_norm(self):
        from lib.angular import hs1_norm

        config = small_config(initial={'amplitude': 0.2, 'profile': 'dipole', 'center': (0.5, 0.0, 0.0)})
        phi = config.build_initial()
        assert hs1_norm(phi, config.initial.regularity) == pytest.approx(0.2, rel=1e-10)

    def test_steps(self):
        assert small_config().steps == 25


class TestNonlinearity:
    def test_trilinear_matches_cubic(self, smooth_field):
        V = PotentialSpec(PotentialKind.YUKAWA)
        cubic = hartree_force(smooth_field, V)
        trilinear = trilinear_force(smooth_field, smooth_field, smooth_field, V)
        assert (cubic - trilinear).l2_norm() <= 1e-12 * cubic.l2_norm()

    def test_zero_field(self, small_grid):
        zero = Field.zeros(small_grid)
        assert hartree_force(zero, PotentialSpec(PotentialKind.YUKAWA)).l2_norm() == 0

    def test_constant_field(self, small_grid):
        """V * |c|^2 on a constant is V_hat(0) |c|^2."""
        c = 0.3 + 0.4j
        u = Field(small_grid, np.full(small_grid.shape, c))
        force = hartree_force(u, PotentialSpec(PotentialKind.YUKAWA, mu0=2.0))
        np.testing.assert_allclose(force.values, np.pi * abs(c) ** 2 * c, atol=1e-12)

    def test_gauge_covariance(self, smooth_field):
        V = PotentialSpec(PotentialKind.YUKAWA)
        phase = np.exp(0.7j)
        rotated = hartree_force(smooth_field * phase, V)
        expected = hartree_force(smooth_field, V) * phase
        np.testing.assert_allclose(rotated.values, expected.values, atol=1e-13 * np.abs(expected.values).max())

    def test_radial_closure(self):
        grid = Grid3D(48, 12.0)
        force = hartree_force(gaussian_field(grid, 1.5), PotentialSpec(PotentialKind.YUKAWA, mu0=4.0))
        peak = np.abs(force.values).max()
        for component in spherical_gradient(force):
            assert np.abs(component.values).max() <= 1e-8 * peak

    def test_energy_positive_for_repulsive_potential(self, smooth_field):
        assert energy(smooth_field, 1.0, PotentialSpec(PotentialKind.YUKAWA)) > 0


class TestStrang:
    def test_conservation(self):
        config = small_config(initial={'amplitude': 0.5})
        trajectory = integrate(config)
        assert trajectory.mass_drift() < 1e-10
        assert trajectory.energy_drift() < 1e-3
        assert trajectory.times[-1] == pytest.approx(1.0)
        assert len(trajectory.times) == 6

    def test_self_convergence_order(self):
        config = small_config(initial={'amplitude': 0.5})
        convergence = self_convergence_order(config.build_initial(), config.mass, config.build_potential(),
                                             0.04, 1.0)
        assert abs(convergence['order'] - 2.0) <= 0.2

    def test_backward_run_returns(self):
        config = small_config(initial={'amplitude': 0.5})
        phi = config.build_initial()
        V = config.build_potential()
        forward = evolve(phi, 1.0, V, 0.04, 10, stride=10).final
        back = evolve(forward, 1.0, V, -0.04, 10, stride=10).final
        assert (back - phi).l2_norm() <= 1e-10 * phi.l2_norm()

    def test_zero_potential_is_free_flow(self, small_grid, smooth_field):
        silent = PotentialSpec(PotentialKind.CUSTOM, gamma1=0.0, gamma2=2.0, rule=np.zeros_like)
        stepped = strang_step(smooth_field, 0.04, 1.0, silent)
        free = free_evolve(smooth_field, 0.04, 1.0)
        assert (stepped - free).l2_norm() <= 1e-12 * smooth_field.l2_norm()
        final = evolve(smooth_field, 1.0, silent, 0.04, 10, stride=10).final
        assert (final - free_evolve(smooth_field, 0.4, 1.0)).l2_norm() <= 1e-12 * smooth_field.l2_norm()

    def test_direct_step_checks_dt(self, smooth_field):
        V = PotentialSpec(PotentialKind.YUKAWA)
        with pytest.raises(PreconditionError, match="reduce dt"):
            strang_step(smooth_field, 0.2, 1.0, V)
        with pytest.raises(PreconditionError, match="reduce dt"):
            evolve(smooth_field, 1.0, V, -0.2, 3)
        with pytest.raises(PreconditionError, match="non-zero"):
            strang_step(smooth_field, 0.0, 1.0, V)

    def test_blowup_guard_measures_the_norm(self, monkeypatch):
        """The free flow keeps the H^s norm; a factor below one trips on the first step."""
        config = small_config(initial={'amplitude': 0.5})
        phi = config.build_initial()
        monkeypatch.setattr(integrator, 'BLOWUP_FACTOR', 1.0 + 1e-9)
        free_only = PotentialSpec(PotentialKind.CUSTOM, gamma1=0.0, gamma2=2.0, rule=np.zeros_like)
        evolve(phi, 1.0, free_only, 0.04, 5)
        monkeypatch.setattr(integrator, 'BLOWUP_FACTOR', 0.5)
        with pytest.raises(NumericalFailure, match="norm exceeded") as excinfo:
            evolve(phi, 1.0, config.build_potential(), 0.04, 5)
        assert excinfo.value.time == pytest.approx(0.04)

    def test_blowup_guard(self, small_grid):
        phi = Field(small_grid, np.full(small_grid.shape, np.nan, dtype=complex))
        with pytest.raises(NumericalFailure) as excinfo:
            evolve(phi, 1.0, PotentialSpec(PotentialKind.YUKAWA), 0.01, 3)
        assert excinfo.value.exit_code == 3


class TestPicard:
    def test_small_data_contracts(self):
        config = small_config(initial={'amplitude': 0.01})
        report = duhamel_picard(config.build_initial(), 1.0, config.build_potential(), 1.0,
                                max_iters=6, samples=17)
        assert not report.non_contraction
        assert report.ratios
        assert all(r < 0.5 for r in report.ratios)

    def test_large_data_flags_non_contraction(self):
        config = small_config(initial={'amplitude': 20.0})
        report = duhamel_picard(config.build_initial(), 1.0, config.build_potential(), 1.0,
                                max_iters=6, samples=17)
        assert report.non_contraction

    def test_agrees_with_split_step_on_small_data(self):
        """A width-2 Gaussian on 32^3 keeps the cubic term inside the two-thirds band."""
        config = small_config(grid={'n': 32, 'L': 16.0}, initial={'amplitude': 0.1})
        phi = config.build_initial()
        report = duhamel_picard(phi, 1.0, config.build_potential(), 1.0, max_iters=8, samples=65)
        assert not report.non_contraction
        stepped = integrate(config).final
        free = free_evolve(phi, 1.0, 1.0)
        nonlinear_part = (stepped - free).l2_norm()
        assert nonlinear_part > 1e-8 * phi.l2_norm()
        assert (report.iterate[-1] - stepped).l2_norm() <= 0.05 * nonlinear_part

    def test_minimum_samples(self):
        with pytest.raises(PreconditionError, match="17"):
            sample_times(1.0, 9)

    def test_footprint(self):
        assert footprint_bytes(Grid3D(16, 8.0), 17) == 3 * 17 * 16 ** 3 * 16

    def test_difference_probe(self):
        config = small_config(initial={'amplitude': 0.1})
        phi = config.build_initial()
        V = config.build_potential()
        times = sample_times(1.0, 17)
        base = free_iterate(phi, times, 1.0)
        assert difference_probe(base, base, times, 1.0, V) is None
        other = free_iterate(phi * 1.01, times, 1.0)
        quotient = difference_probe(base, other, times, 1.0, V)
        assert np.isfinite(quotient) and quotient > 0

    def test_zero_data_converges_immediately(self, small_grid):
        report = duhamel_picard(Field.zeros(small_grid), 1.0, PotentialSpec(PotentialKind.YUKAWA), 1.0,
                                samples=17)
        assert report.converged
        assert report.increments == [0.0]


class TestDiracHartree:
    def test_charge_drift(self, small_grid, rng):
        psi = random_spinor(small_grid, 1.0, rng)
        drift = dirac_charge_drift(psi, 0.02, 20, PotentialSpec(PotentialKind.YUKAWA))
        assert drift < 1e-10

    def test_mass_helper(self, smooth_field):
        assert mass(smooth_field) == pytest.approx(smooth_field.l2_norm() ** 2)
