"""Hartree-Dirac system i psi_t = (alpha.D + m beta) psi + [V * |psi|^2] psi."""
from typing import List, Tuple

import numpy as np

from lib.errors import NumericalFailure
from lib.potentials import PotentialSpec
from lib.propagators.dirac import DiracData, dirac_free_evolve
from lib.spectral import Field
from lib.spectral.field import Representation


def dirac_interaction_field(psi: DiracData, V: PotentialSpec) -> np.ndarray:
    """V * sum_a |psi_a|^2, density dealiased before the convolution."""
    grid = psi.grid
    density = Field._adopt(grid, psi.density().astype(np.complex128), Representation.PHYSICAL).spectral()
    symbol = V.multiplier.evaluate(grid) * grid.dealias_mask
    return Field._adopt(grid, symbol * density.values, Representation.SPECTRAL).physical().values.real


def dirac_strang_step(psi: DiracData, dt: float, V: PotentialSpec) -> DiracData:
    half = dirac_free_evolve(psi, 0.5 * dt)
    phase = np.exp(-1j * dt * dirac_interaction_field(half, V))
    kicked = DiracData(tuple(Field._adopt(psi.grid, phase * c.physical().values, Representation.PHYSICAL)
                             for c in half.components), psi.m)
    result = dirac_free_evolve(kicked, 0.5 * dt)
    if not all(np.all(np.isfinite(c.values)) for c in result.components):
        raise NumericalFailure(f"non-finite spinor after a step of size {dt}")
    return result


def dirac_evolve(psi: DiracData, dt: float, steps: int, V: PotentialSpec) -> Tuple[List[float], List[float]]:
    """Integrate and return (times, charges) at every step."""
    times, charges = [0.0], [psi.charge()]
    for step in range(1, steps + 1):
        psi = dirac_strang_step(psi, dt, V)
        times.append(step * dt)
        charges.append(psi.charge())
    return times, charges


def dirac_charge_drift(psi: DiracData, dt: float, steps: int, V: PotentialSpec) -> float:
    _, charges = dirac_evolve(psi, dt, steps, V)
    return abs(charges[-1] - charges[0]) / charges[0] if charges[0] else 0.0
