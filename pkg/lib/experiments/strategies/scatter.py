import pandas as pd

from lib.evolution import integrate
from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.scattering import SURROGATE_LABEL, Verdict, interaction_profile, scattering_report, window_increment
from lib.scattering.surrogate import MIN_SAMPLES, xs_surrogate


class ScatterExperiment(ExperimentStrategy):
    """Scattering diagnostics for one run, optionally paired with a contrast potential."""
    kind = 'scatter'
    default_tolerances = {'halving': 0.5, 'tail_consistent': 0.10, 'tail_inconclusive': 0.50}

    def _diagnose(self, simulation, s: float):
        trajectory = integrate(simulation)
        thresholds = {name: self.tolerance(name) for name in self.default_tolerances}
        report = scattering_report(trajectory, simulation.mass, s, simulation.direction,
                                   notes=list(trajectory.warnings), thresholds=thresholds)
        return trajectory, report

    def _window_trend(self, trajectory, simulation, s: float) -> pd.DataFrame:
        """||w(2T) - w(T)|| for T = horizon/8, horizon/4, horizon/2."""
        profile = interaction_profile(trajectory, simulation.mass)
        rows = []
        for fraction in (0.125, 0.25, 0.5):
            start = fraction * simulation.horizon
            rows.append({'T': start, 'increment': window_increment(profile, trajectory.times,
                                                                   start, 2.0 * start, s)})
        return pd.DataFrame(rows)

    def run(self) -> ExperimentResult:
        params = self.params
        simulation = self.seeded(params.simulation)
        s = simulation.initial.regularity if params.s is None else params.s
        result = self.new_result()

        trajectory, report = self._diagnose(simulation, s)
        result.warnings.extend(report.notes)
        result.tables['increments'] = report.increments
        result.tables['residuals'] = report.residual_frame()
        result.tables['trajectory'] = trajectory.to_frame()
        trend = self._window_trend(trajectory, simulation, s)
        result.tables['window_increments'] = trend
        result.summary['scattering'] = report.summary()
        result.summary['regularity'] = s

        result.checks.append(self.check('verdict', report.verdict is Verdict.SCATTERING_CONSISTENT, True,
                                        'flag', note=report.verdict.value))
        increments = trend['increment'].tolist()
        result.checks.append(self.check(
            'window_increments_decrease', all(b <= a for a, b in zip(increments, increments[1:])), True,
            'flag', asserted=False, note='||w(2T) - w(T)|| over T = horizon/8, /4, /2'))

        if params.surrogate and simulation.direction == 1 and len(trajectory.snapshots) >= MIN_SAMPLES:
            surrogate = xs_surrogate(trajectory.times, trajectory.snapshots, simulation.mass, s, params.N0)
            result.tables['surrogate'] = pd.DataFrame(surrogate.rows())
            result.summary['surrogate'] = {'label': surrogate.label, 'value': surrogate.value}
        elif params.surrogate:
            result.summary['surrogate'] = {'label': SURROGATE_LABEL, 'value': None,
                                           'note': f'needs a forward run with at least {MIN_SAMPLES} samples'}

        if params.contrast is not None:
            contrast_sim = simulation.model_copy(update={'potential': params.contrast})
            _, contrast = self._diagnose(contrast_sim, s)
            result.tables['contrast_residuals'] = contrast.residual_frame()
            result.summary['contrast'] = contrast.summary()
            own = report.residual_ratios[-1]
            other = contrast.residual_ratios[-1]
            result.checks.append(self.check(
                'decay_ratio_below_contrast', own, other, '<',
                note=f'{simulation.potential.kind} residual ratio vs {params.contrast.kind}'))
            result.plots.append(PlotSeries('contrast_residuals', 'horizon', 'residual', series='contrast'))

        if params.save_snapshots:
            result.snapshots['initial'] = trajectory.initial
            result.snapshots['phi_plus'] = report.phi_plus
        result.plots.extend([
            PlotSeries('residuals', 'horizon', 'residual'),
            PlotSeries('increments', 't_end', 'increment'),
            PlotSeries('window_increments', 'T', 'increment', series='window_increment'),
        ])
        return result
