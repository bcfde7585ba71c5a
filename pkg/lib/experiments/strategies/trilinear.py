from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.scattering import default_tuples, trilinear_probe


class TrilinearExperiment(ExperimentStrategy):
    kind = 'trilinear'
    default_tolerances = {'trend_slope': 0.1}

    def run(self) -> ExperimentResult:
        params = self.params
        grid = params.grid.build()
        tuples = params.tuples or default_tuples(params.equal_bands, params.low_band)
        report = trilinear_probe(grid, tuples, params.mass, params.potential.build(), params.r, params.s,
                                 params.ensemble, self.seed, params.samples, params.window, params.N0,
                                 params.angular_slot, self.tolerance('trend_slope'))
        result = self.new_result()
        result.tables['trilinear'] = report.to_frame()
        result.summary['trilinear'] = report.summary()
        result.checks.append(self.check('ratio_trend_slope', report.slope, self.tolerance('trend_slope'),
                                        note='log max ratio against log N, equal-band family'))
        result.plots.append(PlotSeries('trilinear', 'N', 'max_ratio', group_by='N3'))
        return result
