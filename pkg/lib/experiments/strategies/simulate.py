from lib.evolution import integrate, self_convergence_order
from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries


class SimulateExperiment(ExperimentStrategy):
    """Integrate the Hartree flow and check conservation (and optionally the Strang order)."""
    kind = 'simulate'
    default_tolerances = {'mass_drift': 1e-8, 'energy_drift': 1e-5, 'order': 0.2}

    def run(self) -> ExperimentResult:
        params = self.params
        simulation = self.seeded(params.simulation)
        result = self.new_result()

        trajectory = integrate(simulation)
        result.tables['trajectory'] = trajectory.to_frame()
        result.warnings.extend(trajectory.warnings)
        result.checks.append(self.check('mass_drift', trajectory.mass_drift(), self.tolerance('mass_drift')))
        result.checks.append(self.check('energy_drift', trajectory.energy_drift(),
                                        self.tolerance('energy_drift')))
        result.summary.update({
            'steps': simulation.steps,
            'snapshots': len(trajectory.times),
            'mass_drift': trajectory.mass_drift(),
            'energy_drift': trajectory.energy_drift(),
            'final_hs1': trajectory.hs1[-1],
        })

        if params.convergence:
            convergence = self_convergence_order(
                trajectory.initial, simulation.mass, simulation.build_potential(),
                simulation.dt, params.convergence_horizon)
            result.summary['convergence'] = convergence
            result.checks.append(self.check('strang_order_error', abs(convergence['order'] - 2.0),
                                            self.tolerance('order'), note='observed order vs 2'))

        if params.save_snapshots:
            result.snapshots['initial'] = trajectory.initial
            result.snapshots['final'] = trajectory.final
        result.plots.extend([
            PlotSeries('trajectory', 't', 'mass'),
            PlotSeries('trajectory', 't', 'energy'),
            PlotSeries('trajectory', 't', 'hs1'),
        ])
        return result
