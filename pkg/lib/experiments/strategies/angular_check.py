import numpy as np
import pandas as pd

from lib.angular import (
    is_radial,
    radial_convolution_commutator,
    sphere_sobolev_ratio,
    spherical_gradient,
    young_mixed_check,
)
from lib.experiments.strategies.base_experiment import ExperimentResult, ExperimentStrategy, PlotSeries
from lib.potentials import PotentialKind, PotentialSpec, kernel
from lib.spectral import Field, Grid3D, dealias

# (p, q, p1, q1, p2) with 1/p1 + 1/p2 - 1 = 1/p and 1/q1 + 1/p2 - 1 <= 1/q
YOUNG_EXPONENTS = (
    (2.0, 2.0, 2.0, 2.0, 1.0),
    (4.0, 4.0, 2.0, 2.0, 4.0 / 3.0),
    (6.0, 6.0, 2.0, 2.0, 1.5),
    (3.0, 2.0, 2.0, 2.0, 1.2),
)
RADIAL_WIDTH = 0.75


def gaussian(grid: Grid3D, width: float, center=(0.0, 0.0, 0.0)) -> Field:
    x1, x2, x3 = grid.coords
    c1, c2, c3 = center
    r2 = (x1 - c1) ** 2 + (x2 - c2) ** 2 + (x3 - c3) ** 2
    return Field(grid, np.exp(-r2 / (2.0 * width ** 2)))


class AngularCheckExperiment(ExperimentStrategy):
    """Spherical-gradient identities, the radial commutator and mixed-norm Young checks."""
    kind = 'angular-check'
    default_tolerances = {'radial_annihilation': 1e-10, 'commutator': 1e-8, 'young_allowance': 0.05}

    def _young_table(self, rng: np.random.Generator) -> pd.DataFrame:
        params = self.params
        grid = params.young_grid.build()
        rows = []
        for instance in range(params.young_instances):
            p, q, p1, q1, p2 = YOUNG_EXPONENTS[rng.integers(len(YOUNG_EXPONENTS))]
            psi = gaussian(grid, rng.uniform(0.5, 2.0))
            noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
            center = tuple(rng.uniform(-2.0, 2.0, size=3))
            f = dealias(Field(grid, noise * gaussian(grid, rng.uniform(1.0, 2.5), center).values))
            check = young_mixed_check(psi, f, p, q, p1, q1, p2, self.tolerance('young_allowance'))
            rows.append({'instance': instance, 'p': p, 'q': q, 'p1': p1, 'q1': q1, 'p2': p2,
                         'lhs': check.lhs, 'rhs': check.rhs, 'ratio': check.lhs / check.rhs,
                         'holds': check.holds})
        return pd.DataFrame(rows)

    def run(self) -> ExperimentResult:
        params = self.params
        rng = np.random.default_rng(self.seed)
        result = self.new_result()

        grid = params.grid.build()
        radial = gaussian(grid, RADIAL_WIDTH)
        annihilation = max(c.max_abs() for c in spherical_gradient(radial)) / radial.max_abs()
        result.checks.append(self.check('radial_annihilation', annihilation,
                                        self.tolerance('radial_annihilation')))
        result.checks.append(self.check('gaussian_is_radial', is_radial(radial), True, 'flag'))

        commutator_grid = params.commutator_grid.build()
        yukawa = kernel(PotentialSpec(PotentialKind.YUKAWA, mu0=params.mu0), commutator_grid)
        shifted = gaussian(commutator_grid, 1.0, (1.5, -0.5, 1.0))
        defect = radial_convolution_commutator(yukawa, shifted)
        result.checks.append(self.check('yukawa_commutator', defect, self.tolerance('commutator')))

        young = self._young_table(rng)
        result.tables['young'] = young
        result.checks.append(self.check('young_instances_hold', int(young['holds'].sum()), len(young), '>=',
                                        note=f"max ratio {young['ratio'].max():.4f}"))

        dipole = Field(grid, grid.coords[0] * gaussian(grid, 1.5).values)
        sphere = {'ratio': sphere_sobolev_ratio(dipole, params.sphere_r_tilde),
                  'sup_ratio': sphere_sobolev_ratio(dipole, params.sphere_r_tilde, sup_variant=True)}
        result.summary.update({'radial_annihilation': annihilation, 'commutator': defect,
                               'young_max_ratio': float(young['ratio'].max()), 'sphere': sphere})
        result.plots.append(PlotSeries('young', 'instance', 'ratio', group_by='p'))
        return result
