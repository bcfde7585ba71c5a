import pandas as pd

from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.propagators import angular_strichartz_probe, besov_strichartz_probe, low_band_strichartz_check


class StrichartzExperiment(ExperimentStrategy):
    """Empirical Strichartz exponents: Besov (q, r) probe, angular probes, low-band check."""
    kind = 'strichartz'
    default_tolerances = {'slope': 0.1}

    def _record(self, result: ExperimentResult, table: str, report, asserted: bool = True) -> None:
        result.tables[table] = report.to_frame()
        result.summary[table] = report.summary()
        result.checks.append(self.check(f'{table}_slope', report.slope, report.threshold, '<=',
                                        asserted=asserted, note=f'ci {report.ci:.3g}'))
        result.plots.append(PlotSeries(table, 'band', 'ratio', series=table))

    def run(self) -> ExperimentResult:
        params = self.params
        grid = params.grid.build()
        common = dict(ensemble=params.ensemble, samples=params.samples, window=params.window,
                      tolerance=self.tolerance('slope'))
        result = self.new_result()
        result.summary['grid'] = grid.describe()

        if params.besov is not None:
            report = besov_strichartz_probe(grid, params.mass, params.besov.scales, params.besov.q,
                                            params.besov.r, seed=self.seed, **common)
            self._record(result, 'besov', report)

        for index, r in enumerate(params.angular_r):
            seed = self.seed + 1000 * (index + 1)
            report = angular_strichartz_probe(grid, params.mass, params.angular_scales, r,
                                              seed=seed, N0=params.N0, **common)
            self._record(result, f'angular_r{r:g}', report)
            if params.radial_control:
                control = angular_strichartz_probe(grid, params.mass, params.angular_scales, r,
                                                   seed=seed, N0=params.N0, radial=True, **common)
                self._record(result, f'angular_radial_r{r:g}', control, asserted=False)

        if params.low_band:
            low = low_band_strichartz_check(grid, params.mass, params.N0, params.ensemble, self.seed,
                                            params.samples, params.window)
            result.tables['low_band'] = pd.DataFrame({'trial': range(len(low.constants)),
                                                      'constant': low.constants})
            result.summary['low_band'] = low.summary()
            result.checks.append(self.check('low_band_constants_finite', low.passed, True, 'flag'))
        return result
