import numpy as np
import pandas as pd

from lib.errors import UsageError
from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.potentials import growth_check, piece_scaling_fit


class PotentialScalingExperiment(ExperimentStrategy):
    """Log-log slopes of ||V_M||_{L^p} and ||F^-1 chi_M||_{L^p}, plus symbol growth checks."""
    kind = 'potential-scaling'
    default_tolerances = {'slope': 0.15, 'coulomb_slope': 0.2}

    def run(self) -> ExperimentResult:
        params = self.params
        result = self.new_result()
        lines = []
        for fit_params in params.fits:
            if fit_params.tolerance_name not in self.tolerances:
                raise UsageError(f"fit '{fit_params.label}' names unknown tolerance "
                                 f"'{fit_params.tolerance_name}'")
            spec = fit_params.potential.build()
            fit = piece_scaling_fit(spec, fit_params.p, fit_params.scales, n=params.n)
            if fit_params.kernel:
                slope, intercept = fit.kernel_slope, fit.kernel_intercept
                expected, column = fit.expected_kernel_slope, 'log_kernel_norm'
            else:
                slope, intercept = fit.slope, fit.intercept
                expected, column = fit.expected_slope, 'log_piece_norm'
            if fit_params.expected_slope is not None:
                expected = fit_params.expected_slope

            table = pd.DataFrame(fit.rows())
            table['fitted'] = intercept + slope * table['log_M']
            name = f'fit_{fit_params.label}'
            result.tables[name] = table
            lines.append({'label': fit_params.label, 'p': fit_params.p, 'slope': slope,
                          'intercept': intercept, 'expected_slope': expected})
            result.checks.append(self.check(
                f'{fit_params.label}_slope_error', abs(slope - expected),
                self.tolerance(fit_params.tolerance_name), note=f'slope {slope:.4f}, expected {expected:.4f}'))
            result.plots.extend([
                PlotSeries(name, 'log_M', column, series=f'{fit_params.label}-points'),
                PlotSeries(name, 'log_M', 'fitted', series=f'{fit_params.label}-line'),
            ])
        result.tables['fit_lines'] = pd.DataFrame(lines)
        result.tables['growth'] = self._growth_table(params)
        result.summary['fits'] = lines
        return result

    def _growth_table(self, params) -> pd.DataFrame:
        rows = []
        seen = set()
        for fit_params in params.fits:
            spec = fit_params.potential.build()
            if spec in seen:
                continue
            seen.add(spec)
            for k in params.growth_orders:
                report = growth_check(spec, k)
                rows.append({'potential': spec.kind.value, **report.as_dict()})
                if not np.isfinite(report.low_max_ratio) or not np.isfinite(report.high_max_ratio):
                    self.logger.warning(f"{spec.kind.value}: non-finite growth ratio at k={k}")
        return pd.DataFrame(rows)
