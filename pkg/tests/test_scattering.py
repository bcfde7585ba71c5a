"""
Tests for the scattering lab.

Validates:
- V^p dynamic program against exhaustive search
- Interaction picture and verdict rules
- Cubic size of the scattering correction
- X^s surrogate on free solutions and under time refinement
- Trilinear probe preconditions and pairing
"""
import itertools

import numpy as np
import pytest

from lib.angular import hs1_norm
from lib.errors import PreconditionError
from lib.evolution.integrator import TrajectoryRecord, evolve
from lib.potentials import PotentialKind, PotentialSpec
from lib.propagators import free_samples
from lib.scattering import (
    VariationSamples,
    Verdict,
    default_tuples,
    embedding_check,
    extract_scattering_state,
    interaction_profile,
    trilinear_probe,
    vp_norm_discrete,
    xs_surrogate,
)
from lib.scattering.diagnostics import verdict
from lib.scattering.trilinear import TrilinearRow, bound_constant, check_exponent, space_time_pairing, trend_slope
from lib.scattering.surrogate import _band_term
from lib.scattering.variation import best_chain_value
from lib.spectral import DyadicBand, Field, project, resolved_bands
from tests.helpers import gaussian_field


def brute_force_chain(Dp: np.ndarray) -> float:
    """max over every increasing index subsequence of the summed consecutive entries."""
    size = Dp.shape[0]
    best = 0.0
    for length in range(2, size + 1):
        for chain in itertools.combinations(range(size), length):
            total = 0.0
            for a, b in zip(chain, chain[1:]):
                total += Dp[a, b]
            best = max(best, total)
    return best


def free_trajectory(phi: Field, times, m: float = 1.0) -> TrajectoryRecord:
    record = TrajectoryRecord(regularity=0.3, m=m)
    for t, u in zip(times, free_samples(phi, times, m)):
        record.times.append(float(t))
        record.snapshots.append(u)
    return record


class TestVariation:
    def test_dynamic_program_matches_exhaustive_search(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            size = int(rng.integers(1, 11))
            points = rng.standard_normal((size, 2))
            D = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
            for p in (1.0, 2.0, 3.5):
                assert best_chain_value(D ** p) == brute_force_chain(D ** p)

    @pytest.mark.slow
    def test_dynamic_program_matches_exhaustive_search_up_to_twelve(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            size = int(rng.integers(1, 13))
            values = rng.standard_normal((size, 3))
            D = np.linalg.norm(values[:, None, :] - values[None, :, :], axis=-1) ** 2
            assert best_chain_value(D) == brute_force_chain(D)

    def test_monotone_path_total_variation(self):
        samples = VariationSamples([0.0, 1.0, 2.0, 3.0], [np.array([v]) for v in (0.0, 1.0, 3.0, 6.0)])
        assert vp_norm_discrete(samples, 1.0) == pytest.approx(6.0)

    def test_alternating_sequence(self):
        """[f, 0, f, 0] has V^2 norm sqrt(3) ||f||."""
        f = np.array([1.0, 0.0])
        zero = np.zeros(2)
        samples = VariationSamples([0.0, 1.0, 2.0, 3.0], [f, zero, f, zero])
        assert vp_norm_discrete(samples, 2.0) == pytest.approx(np.sqrt(3.0))

    def test_infinite_endpoint(self):
        samples = VariationSamples([0.0], [np.array([3.0, 4.0])], infinite_endpoint=True)
        assert vp_norm_discrete(samples, 2.0) == pytest.approx(5.0)

    def test_constant_path_has_zero_variation(self):
        f = np.array([1.0, 2.0])
        assert vp_norm_discrete(VariationSamples([0.0, 1.0, 2.0], [f, f, f]), 2.0) == 0.0

    def test_times_must_increase(self):
        f = np.zeros(2)
        with pytest.raises(PreconditionError, match="increase"):
            VariationSamples([0.0, 1.0, 1.0], [f, f, f])

    def test_exponent_range(self):
        f = np.zeros(2)
        with pytest.raises(PreconditionError, match="p=0.5"):
            vp_norm_discrete(VariationSamples([0.0, 1.0], [f, f]), 0.5)

    def test_embedding(self):
        rng = np.random.default_rng(3)
        values = [rng.standard_normal(3) for _ in range(12)]
        check = embedding_check(VariationSamples(np.arange(12.0), values), 2.0, 3.0)
        assert check.holds
        assert check.vq <= check.vp

    def test_field_samples(self, smooth_field):
        samples = VariationSamples([0.0, 1.0], [smooth_field, Field.zeros(smooth_field.grid)])
        assert vp_norm_discrete(samples, 2.0) == pytest.approx(smooth_field.l2_norm())


class TestDiagnostics:
    def test_free_profile_is_constant(self, smooth_field):
        trajectory = free_trajectory(smooth_field, np.linspace(0.0, 2.0, 5))
        for w in interaction_profile(trajectory, 1.0):
            assert (w - smooth_field).l2_norm() <= 1e-12 * smooth_field.l2_norm()

    def test_free_run_has_no_tail(self, smooth_field):
        trajectory = free_trajectory(smooth_field, np.linspace(0.0, 2.0, 5))
        state = extract_scattering_state(trajectory, 1.0)
        assert state.horizon == pytest.approx(2.0)
        assert (state.phi_plus - smooth_field).l2_norm() <= 1e-12 * smooth_field.l2_norm()
        assert state.tail <= 1e-10

    def test_horizon_beyond_trajectory(self, smooth_field):
        trajectory = free_trajectory(smooth_field, np.linspace(0.0, 2.0, 5))
        with pytest.raises(PreconditionError, match="horizon"):
            extract_scattering_state(trajectory, 1.0, horizon=4.0)

    def test_verdict_rules(self):
        assert verdict([1.0, 0.5, 0.2], 0.01, 1.0) is Verdict.SCATTERING_CONSISTENT
        assert verdict([0.1, 0.2, 0.3], 0.2, 1.0) is Verdict.NON_SCATTERING
        assert verdict([1.0, 0.5, 0.2], 0.6, 1.0) is Verdict.INCONCLUSIVE
        assert verdict([1.0, 0.5, 0.4], 0.01, 1.0) is Verdict.INCONCLUSIVE

    def test_verdict_thresholds_are_overridable(self):
        assert verdict([1.0, 0.5, 0.4], 0.01, 1.0, halving=0.9) is Verdict.SCATTERING_CONSISTENT

    def test_scattering_state_moves_cubically(self, small_grid):
        """||phi_+ - phi|| / delta^3 settles as the datum shrinks."""
        shape = gaussian_field(small_grid, 1.5)
        V = PotentialSpec(PotentialKind.YUKAWA)
        ratios = []
        for delta in (0.005, 0.01, 0.02):
            phi = shape * (delta / hs1_norm(shape, 0.3))
            state = extract_scattering_state(evolve(phi, 1.0, V, 0.05, 40, stride=8), 1.0)
            ratios.append(hs1_norm(state.phi_plus - phi, 0.3) / delta ** 3)
        assert min(ratios) > 0
        assert max(ratios) <= 1.02 * min(ratios)


class TestSurrogate:
    def test_scalar_band_terms_of_free_solution(self, smooth_field):
        """Pulled back to the interaction picture a free band piece does not move."""
        times = np.linspace(0.0, 1.0, 17)
        pieces = [project(u, DyadicBand.inhomogeneous(1.0, 0.5)) for u in free_samples(smooth_field, times, 1.0)]
        sup, variation = _band_term(pieces, times, 1.0)
        assert sup > 0
        assert variation <= 1e-12 * sup

    def test_report_structure(self, smooth_field):
        times = np.linspace(0.0, 1.0, 17)
        report = xs_surrogate(times, free_samples(smooth_field, times, 1.0), 1.0, 0.3, N0=0.5)
        assert report.label == 'X^s-surrogate'
        assert report.bands == [band.scale for band in resolved_bands(smooth_field.grid, 0.5)]
        assert report.value > 0
        assert len(report.rows()) == len(report.bands)

    def test_needs_enough_samples(self, smooth_field):
        times = np.linspace(0.0, 1.0, 5)
        with pytest.raises(PreconditionError, match="17"):
            xs_surrogate(times, free_samples(smooth_field, times, 1.0), 1.0, 0.3)

    def test_refinement_never_lowers_the_value(self, small_grid):
        shape = gaussian_field(small_grid, 1.5)
        phi = shape * (0.5 / shape.l2_norm())
        trajectory = evolve(phi, 1.0, PotentialSpec(PotentialKind.YUKAWA), 0.05, 32)
        times, snapshots = trajectory.times, trajectory.snapshots
        fine = xs_surrogate(times, snapshots, 1.0, 0.3, N0=0.5).value
        coarse = xs_surrogate(times[::2], snapshots[::2], 1.0, 0.3, N0=0.5).value
        assert len(snapshots[::2]) == 17
        assert coarse <= fine * (1.0 + 1e-12)


class TestTrilinear:
    def test_admissible_exponent(self):
        check_exponent(3.6, 0.3, PotentialSpec(PotentialKind.YUKAWA))

    def test_exponent_too_large(self):
        with pytest.raises(PreconditionError, match="1/4 < 1/r < min\\(s, gamma2/6, 3/10\\)"):
            check_exponent(5.0, 0.3, PotentialSpec(PotentialKind.YUKAWA))

    def test_binding_constraint_is_named(self):
        with pytest.raises(PreconditionError, match="s=0.2000") as excinfo:
            check_exponent(3.6, 0.2, PotentialSpec(PotentialKind.YUKAWA))
        assert excinfo.value.constraint == '1/r < s'

    def test_gamma2_constraint(self):
        spec = PotentialSpec(PotentialKind.POWER, gamma=1.5)
        with pytest.raises(PreconditionError) as excinfo:
            check_exponent(3.6, 0.3, spec)
        assert excinfo.value.constraint == '1/r < gamma2/6'

    def test_bound_constant_regimes(self):
        assert bound_constant(1.0, 4.0, 4.0, 4.0, 2.0) == pytest.approx(2.0)
        assert bound_constant(1.0, 16.0, 1.0, 16.0, 2.0) == pytest.approx(1.0)

    def test_zero_slot_pairs_to_zero(self, smooth_field):
        times = np.linspace(0.0, 1.0, 5)
        flow = free_samples(smooth_field, times, 1.0)
        zero = [Field.zeros(smooth_field.grid) for _ in times]
        assert space_time_pairing(flow, zero, flow, flow, times, PotentialSpec(PotentialKind.YUKAWA)) == 0

    def test_default_tuples(self):
        tuples = default_tuples([0.5, 1.0, 2.0, 4.0], 0.25)
        assert (1.0, 1.0, 1.0, 1.0) in tuples
        assert (0.25, 2.0, 0.25, 2.0) in tuples
        assert (0.25, 0.5, 0.25, 0.5) not in tuples

    def test_trend_slope_uses_equal_bands(self):
        rows = [TrilinearRow((N, N, N, N), 3.6, 1.0, [2.0 * N ** 0.05]) for N in (1.0, 2.0, 4.0)]
        rows.append(TrilinearRow((0.25, 4.0, 0.25, 4.0), 3.6, 1.0, [100.0]))
        assert trend_slope(rows) == pytest.approx(0.05)

    def test_trend_slope_needs_two_scales(self):
        rows = [TrilinearRow((1.0, 1.0, 1.0, 1.0), 3.6, 1.0, [1.0])]
        assert np.isnan(trend_slope(rows))

    def test_band_below_N0_rejected(self, small_grid):
        with pytest.raises(PreconditionError, match="below N0"):
            trilinear_probe(small_grid, [(0.25, 1.0, 0.25, 1.0)], 1.0, PotentialSpec(PotentialKind.YUKAWA), 3.6,
                            N0=0.5)

    def test_probe_is_reproducible(self, small_grid):
        kwargs = dict(ensemble=2, seed=3, samples=5, window=1.0, N0=0.5)
        V = PotentialSpec(PotentialKind.YUKAWA)
        first = trilinear_probe(small_grid, [(1.0, 1.0, 1.0, 1.0)], 1.0, V, 3.6, **kwargs)
        second = trilinear_probe(small_grid, [(1.0, 1.0, 1.0, 1.0)], 1.0, V, 3.6, **kwargs)
        assert first.rows[0].ratios == second.rows[0].ratios
        assert all(ratio > 0 for ratio in first.rows[0].ratios)
