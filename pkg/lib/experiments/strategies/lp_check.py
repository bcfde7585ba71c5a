import numpy as np
import pandas as pd

from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy
from lib.propagators import free_evolve
from lib.spectral import Field, Grid3D, dealias, project, resolved_bands, transform
from lib.spectral.littlewood_paley import decompose, manifest_entries, partition_of_unity_defect, reconstruct


def smooth_random_field(grid: Grid3D, rng: np.random.Generator) -> Field:
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    envelope = np.exp(-grid.radius ** 2 / (2.0 * (grid.L / 8.0) ** 2))
    return dealias(Field(grid, noise * envelope))


def _relative(a: Field, b: Field) -> float:
    return (a - b).l2_norm() / b.l2_norm()


class LpCheckExperiment(ExperimentStrategy):
    """Exact identities of the transform, the free flow and the Littlewood-Paley pieces."""
    kind = 'lp-check'
    default_tolerances = {'identity': 1e-10}

    def run(self) -> ExperimentResult:
        params = self.params
        grid = params.grid.build()
        rng = np.random.default_rng(self.seed)
        f = smooth_random_field(grid, rng)
        t1, t2 = params.times
        m = params.mass
        bands = resolved_bands(grid, params.N0)

        errors = {
            'fft_roundtrip': _relative(transform(transform(f, 'forward'), 'inverse'), f),
            'parseval': abs(f.spectral().l2_norm() - f.l2_norm()) / f.l2_norm(),
            'free_unitarity': abs(free_evolve(f, t1, m).l2_norm() - f.l2_norm()) / f.l2_norm(),
            'free_group': _relative(free_evolve(free_evolve(f, t1, m), t2, m), free_evolve(f, t1 + t2, m)),
            'free_inverse': _relative(free_evolve(free_evolve(f, t1, m), -t1, m), f),
            'partition_of_unity': partition_of_unity_defect(grid, params.N0),
            'reconstruction': _relative(reconstruct(decompose(f, params.N0)), f),
        }
        rows = []
        for band in bands:
            piece = project(f, band)
            defect = (project(piece, band.widen()) - piece).l2_norm() / f.l2_norm()
            rows.append({**band.label(), 'idempotence_defect': defect, 'piece_norm': piece.l2_norm()})
        errors['widened_idempotence'] = max(row['idempotence_defect'] for row in rows)

        result = self.new_result()
        result.tables['bands'] = pd.DataFrame(rows)
        result.tables['identities'] = pd.DataFrame({'identity': list(errors), 'error': list(errors.values())})
        result.summary.update({'grid': grid.describe(), 'bands': manifest_entries(bands), 'errors': errors})
        for name, value in errors.items():
            result.checks.append(self.check(name, value, self.tolerance('identity')))
        return result
