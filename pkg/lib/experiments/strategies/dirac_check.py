import numpy as np
import pandas as pd

from lib.evolution.dirac_hartree import dirac_evolve
from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.propagators import free_evolve
from lib.propagators.dirac import (
    IDENTITY,
    DiracData,
    dirac_bracket,
    dirac_free_evolve,
    dirac_hamiltonian_symbol,
    dirac_projector,
    dirac_split,
    projection_norm_ratio,
    random_spinor,
)


def _relative(a: DiracData, b: DiracData) -> float:
    scale = b.l2_norm()
    return (a - b).l2_norm() / scale if scale else (a - b).l2_norm()


class DiracCheckExperiment(ExperimentStrategy):
    """Projector identities, the split free Dirac flow and Hartree-Dirac charge conservation."""
    kind = 'dirac-check'
    default_tolerances = {'identity': 1e-10, 'charge_drift': 1e-8}

    def _symbol_errors(self, rng: np.random.Generator, points: int, m: float) -> dict:
        errors = {'sum': 0.0, 'idempotent_plus': 0.0, 'idempotent_minus': 0.0, 'spectral': 0.0}
        for xi in rng.normal(scale=3.0, size=(points, 3)):
            plus, minus = dirac_projector(xi, m, +1), dirac_projector(xi, m, -1)
            bracket = dirac_bracket(xi, m)
            errors['sum'] = max(errors['sum'], np.abs(plus + minus - IDENTITY).max())
            errors['idempotent_plus'] = max(errors['idempotent_plus'], np.abs(plus @ plus - plus).max())
            errors['idempotent_minus'] = max(errors['idempotent_minus'], np.abs(minus @ minus - minus).max())
            hamiltonian = dirac_hamiltonian_symbol(xi, m)
            errors['spectral'] = max(errors['spectral'],
                                     np.abs(hamiltonian - bracket * (plus - minus)).max() / bracket)
        return {name: float(value) for name, value in errors.items()}

    def run(self) -> ExperimentResult:
        params = self.params
        grid = params.grid.build()
        m = params.mass
        rng = np.random.default_rng(self.seed)
        result = self.new_result()
        identity = self.tolerance('identity')

        symbol = self._symbol_errors(rng, params.symbol_points, m)
        for name, value in symbol.items():
            result.checks.append(self.check(f'symbol_{name}', value, identity))

        psi = random_spinor(grid, m, rng)
        plus, minus = dirac_split(psi)
        grid_errors = {
            'split_sum': _relative(plus + minus, psi),
            'split_idempotent': _relative(dirac_split(plus)[0], plus),
            'split_orthogonal': dirac_split(minus)[0].l2_norm() / psi.l2_norm(),
        }
        t = params.evolve_time
        squared_mass = m ** 2
        evolved_plus = DiracData(tuple(free_evolve(c, t, squared_mass) for c in plus.components), m)
        evolved_minus = DiracData(tuple(free_evolve(c, -t, squared_mass) for c in minus.components), m)
        grid_errors['plus_phase'] = _relative(dirac_free_evolve(plus, t), evolved_plus)
        grid_errors['minus_phase'] = _relative(dirac_free_evolve(minus, t), evolved_minus)
        grid_errors['free_unitarity'] = abs(dirac_free_evolve(psi, t).l2_norm() / psi.l2_norm() - 1.0)
        for name, value in grid_errors.items():
            result.checks.append(self.check(name, value, identity))

        ratio = projection_norm_ratio(psi, 0.5)
        result.checks.append(self.check('projection_norm_ratio_in_range', 1.0 - 1e-12 <= ratio <= 2.0 + 1e-12,
                                        True, 'flag', note=f'ratio {ratio:.6f}'))

        scaled = DiracData(tuple(c * params.amplitude for c in psi.components), m)
        times, charges = dirac_evolve(scaled, params.dt, params.steps, params.potential.build())
        drift = abs(charges[-1] - charges[0]) / charges[0]
        result.tables['charge'] = pd.DataFrame({'t': times, 'charge': charges})
        result.checks.append(self.check('hartree_dirac_charge_drift', drift, self.tolerance('charge_drift')))
        result.plots.append(PlotSeries('charge', 't', 'charge'))
        result.summary.update({'symbol_errors': symbol, 'grid_errors': grid_errors,
                               'projection_norm_ratio': ratio, 'charge_drift': drift})
        return result
