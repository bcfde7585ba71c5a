import numpy as np
import pandas as pd

from lib.evolution.picard import difference_probe, duhamel_picard, free_iterate, sample_times
from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.spectral import Field


class PicardExperiment(ExperimentStrategy):
    """Duhamel-Picard contraction at small data and its failure at large data."""
    kind = 'picard'
    default_tolerances = {'contraction_ratio': 0.5}

    def _contracting(self, report, start: int, bound: float) -> bool:
        if report.contraction_from(start, bound):
            return True
        # converged under the round-off floor before ``start``
        return report.converged and all(r < bound for r in report.ratios)

    def run(self) -> ExperimentResult:
        params = self.params
        simulation = self.seeded(params.simulation)
        grid = simulation.build_grid()
        V = simulation.build_potential()
        s = simulation.initial.regularity
        phi = simulation.build_initial()
        result = self.new_result()

        report = duhamel_picard(phi, simulation.mass, V, params.horizon, params.max_iters, params.samples, s)
        result.tables['iterations'] = pd.DataFrame(report.rows(), columns=['iteration', 'increment', 'ratio'])
        result.summary['small_data'] = {'amplitude': simulation.initial.amplitude, **report.summary()}
        result.summary['footprint_bytes'] = report.footprint
        bound = self.tolerance('contraction_ratio')
        result.checks.append(self.check(
            f'contraction_from_iteration_{params.contraction_start}',
            self._contracting(report, params.contraction_start, bound), True, 'flag',
            note=f'ratios {[round(r, 4) for r in report.ratios]} < {bound}'))

        if params.large_amplitude is not None:
            large = simulation.initial.model_copy(update={'amplitude': params.large_amplitude})
            big = duhamel_picard(large.build(grid, self.seed), simulation.mass, V, params.horizon,
                                 params.max_iters, params.samples, s)
            result.tables['iterations_large'] = pd.DataFrame(big.rows(),
                                                             columns=['iteration', 'increment', 'ratio'])
            result.summary['large_data'] = {'amplitude': params.large_amplitude, **big.summary()}
            result.checks.append(self.check('non_contraction_flag_large_data', big.non_contraction, True,
                                            'flag'))
            result.plots.append(PlotSeries('iterations_large', 'iteration', 'increment', series='large'))

        if params.difference_pairs:
            result.tables['difference'] = self._difference_table(phi, simulation, V, s, params)

        result.plots.append(PlotSeries('iterations', 'iteration', 'increment', series='small'))
        return result

    def _difference_table(self, phi: Field, simulation, V, s: float, params) -> pd.DataFrame:
        """Sampled difference quotients of the Duhamel term around the free solution."""
        rng = np.random.default_rng([self.seed, 1])
        times = sample_times(params.horizon, params.samples)
        base = free_iterate(phi, times, simulation.mass)
        scale = params.difference_scale * phi.l2_norm()
        rows = []
        for pair in range(params.difference_pairs):
            noise = rng.standard_normal(phi.grid.shape) + 1j * rng.standard_normal(phi.grid.shape)
            bump = Field(phi.grid, noise * np.exp(-phi.grid.radius ** 2 / 8.0))
            bump = bump * (scale / bump.l2_norm())
            other = free_iterate(phi + bump, times, simulation.mass)
            rows.append({'pair': pair, 'quotient': difference_probe(base, other, times, simulation.mass, V, s)})
        return pd.DataFrame(rows)
