"""The semirelativistic free flow exp(-it Lambda_m)."""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from lib.errors import PreconditionError
from lib.spectral import Field, Grid3D, apply_multiplier
from lib.spectral.multipliers import radial_levels


@dataclass(frozen=True)
class DispersionRelation:
    """omega(xi) = sqrt(m + |xi|^2)."""
    m: float = 1.0

    def __post_init__(self):
        if not self.m > 0:
            raise PreconditionError(f"mass m={self.m} must be positive", constraint="m > 0")

    def omega(self, s) -> np.ndarray:
        return np.sqrt(self.m + np.asarray(s, dtype=float) ** 2)

    def on_grid(self, grid: Grid3D) -> np.ndarray:
        return dispersion_on_grid(grid, self.m)

    def max_frequency(self, grid: Grid3D) -> float:
        return float(self.omega(grid.max_lattice_frequency))


@lru_cache(maxsize=32)
def dispersion_on_grid(grid: Grid3D, m: float) -> np.ndarray:
    radii, inverse = radial_levels(grid)
    values = np.sqrt(m + radii ** 2)[inverse]
    values.flags.writeable = False
    return values


def propagator_symbol(grid: Grid3D, t: float, m: float) -> np.ndarray:
    return np.exp(-1j * t * dispersion_on_grid(grid, m))


def free_evolve(phi: Field, t: float, m: float = 1.0) -> Field:
    """exp(-i t Lambda_m) phi, in phi's representation."""
    DispersionRelation(m)
    if t == 0:
        return phi
    return apply_multiplier(phi, propagator_symbol(phi.grid, t, m))


def free_samples(phi: Field, times, m: float = 1.0) -> list:
    """Free solution sampled at ``times``, physical representation."""
    spectrum = phi.spectral()
    return [free_evolve(spectrum, float(t), m).physical() for t in times]


def bracket(M: float) -> float:
    """<M> = (1 + M^2)^(1/2)."""
    return float(np.sqrt(1.0 + M ** 2))
