"""The Hartree nonlinearity F(u) = [V * |u|^2] u and its conserved quantities."""
import numpy as np

from lib.potentials import PotentialSpec
from lib.propagators.free_flow import dispersion_on_grid
from lib.spectral import Field, dealias
from lib.spectral.field import Representation


def _potential_of(density: np.ndarray, f: Field, V: PotentialSpec) -> np.ndarray:
    """V * density with the density dealiased before the convolution."""
    grid = f.grid
    spectrum = Field._adopt(grid, density.astype(np.complex128), Representation.PHYSICAL).spectral()
    symbol = V.multiplier.evaluate(grid)
    return Field._adopt(grid, spectrum.values * grid.dealias_mask * symbol,
                        Representation.SPECTRAL).physical().values


def interaction_field(u: Field, V: PotentialSpec) -> np.ndarray:
    """Real field V * |u|^2 in physical space."""
    return _potential_of(u.density(), u, V).real


def hartree_force(u: Field, V: PotentialSpec) -> Field:
    """Dealiased [V * |u|^2] u, physical representation."""
    physical = u.physical()
    product = interaction_field(physical, V) * physical.values
    return dealias(Field._adopt(u.grid, product, Representation.PHYSICAL))


def trilinear_force(u1: Field, u2: Field, u3: Field, V: PotentialSpec) -> Field:
    """Dealiased [V * (u1 conj(u2))] u3."""
    a, b, c = u1.physical().values, u2.physical().values, u3.physical().values
    product = _potential_of(a * np.conj(b), u1, V) * c
    return dealias(Field._adopt(u1.grid, product, Representation.PHYSICAL))


def mass(u: Field) -> float:
    return u.l2_norm() ** 2


def kinetic_energy(u: Field, m: float) -> float:
    """<u, Lambda_m u>."""
    spectrum = u.spectral().values
    omega = dispersion_on_grid(u.grid, m)
    return float(np.sum(omega * np.abs(spectrum) ** 2) / u.grid.volume)


def potential_energy(u: Field, V: PotentialSpec) -> float:
    """1/2 int (V * |u|^2) |u|^2 dx."""
    return float(0.5 * u.grid.cell_volume * np.sum(interaction_field(u, V) * u.density()))


def energy(u: Field, m: float, V: PotentialSpec) -> float:
    return kinetic_energy(u, m) + potential_energy(u, V)
