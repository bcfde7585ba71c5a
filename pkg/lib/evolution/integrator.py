"""Strang split-step integration of i u_t = Lambda_m u + [V * |u|^2] u."""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd

from lib.angular import hs1_norm, hs_norm
from lib.errors import NumericalFailure, PreconditionError
from lib.evolution.config import MAX_STEP_PHASE, SimulationConfig, step_phase
from lib.evolution.hartree import energy, mass
from lib.potentials import PotentialSpec
from lib.propagators.free_flow import dispersion_on_grid
from lib.spectral import Field, Grid3D, bessel_multiplier
from lib.spectral.field import Representation
from utils.logger import log_execution_time, setup_logger

logger = setup_logger(__name__)

BLOWUP_FACTOR = 1e6
WRAP_WARNING_LEVEL = 1e-6


def check_step_size(grid: Grid3D, m: float, dt: float) -> None:
    if not np.isfinite(dt) or dt == 0:
        raise PreconditionError(f"step size dt={dt} must be finite and non-zero", constraint="dt != 0")
    phase = step_phase(grid, m, dt)
    if phase > MAX_STEP_PHASE:
        raise PreconditionError(f"|dt| * max omega = {phase:.3f} exceeds {MAX_STEP_PHASE}; reduce dt",
                                constraint=f"|dt| * max omega <= {MAX_STEP_PHASE}")


class SobolevGauge:
    """H^s size of a spectrum, for the blow-up guard."""

    def __init__(self, grid: Grid3D, s: float):
        self.volume = grid.volume
        self.weight = np.abs(bessel_multiplier(float(s)).evaluate(grid)) ** 2

    def __call__(self, spectrum: np.ndarray) -> float:
        return float(np.sqrt(np.sum(self.weight * np.abs(spectrum) ** 2) / self.volume))


class SplitStepper:
    """Half free step, exact phase step, half free step; state kept as a spectrum."""

    def __init__(self, grid: Grid3D, m: float, V: PotentialSpec, dt: float):
        check_step_size(grid, m, dt)
        self.grid = grid
        self.m = m
        self.V = V
        self.dt = dt
        self._half = np.exp(-0.5j * dt * dispersion_on_grid(grid, m))
        self._symbol = V.multiplier.evaluate(grid) * grid.dealias_mask

    def _to_physical(self, spectrum: np.ndarray) -> np.ndarray:
        return Field._adopt(self.grid, spectrum, Representation.SPECTRAL).physical().values

    def _to_spectral(self, values: np.ndarray) -> np.ndarray:
        return Field._adopt(self.grid, values, Representation.PHYSICAL).spectral().values

    def step(self, spectrum: np.ndarray) -> np.ndarray:
        half = self._half * spectrum
        values = self._to_physical(half)
        density = self._to_spectral(values.real ** 2 + values.imag ** 2)
        potential = self._to_physical(self._symbol * density).real
        values = np.exp(-1j * self.dt * potential) * values
        return self._half * self._to_spectral(values)


def strang_step(u: Field, dt: float, m: float, V: PotentialSpec, time: Optional[float] = None) -> Field:
    """One symmetric split step; the result keeps u's representation."""
    stepper = SplitStepper(u.grid, m, V, dt)
    spectrum = stepper.step(u.spectral().values)
    if not np.all(np.isfinite(spectrum)):
        raise NumericalFailure(f"non-finite state after a step of size {dt}", time=time)
    return Field._adopt(u.grid, spectrum, Representation.SPECTRAL).as_representation(u.representation)


@dataclass
class TrajectoryRecord:
    times: List[float] = field(default_factory=list)
    snapshots: List[Field] = field(default_factory=list)
    mass: List[float] = field(default_factory=list)
    energy: List[float] = field(default_factory=list)
    hs: List[float] = field(default_factory=list)
    hs1: List[float] = field(default_factory=list)
    regularity: float = 0.3
    m: float = 1.0
    warnings: List[str] = field(default_factory=list)

    def append(self, t: float, u: Field, m: float, V: PotentialSpec) -> None:
        self.times.append(float(t))
        self.snapshots.append(u.physical())
        self.mass.append(mass(u))
        self.energy.append(energy(u, m, V))
        self.hs.append(hs_norm(u, self.regularity))
        self.hs1.append(hs1_norm(u, self.regularity))

    @property
    def initial(self) -> Field:
        return self.snapshots[0]

    @property
    def final(self) -> Field:
        return self.snapshots[-1]

    def mass_drift(self) -> float:
        if not self.mass or self.mass[0] == 0:
            return 0.0
        return abs(self.mass[-1] - self.mass[0]) / self.mass[0]

    def energy_drift(self) -> float:
        if not self.energy or self.energy[0] == 0:
            return 0.0
        return abs(self.energy[-1] - self.energy[0]) / abs(self.energy[0])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'t': self.times, 'mass': self.mass, 'energy': self.energy,
                             'hs': self.hs, 'hs1': self.hs1})

    def snapshot_at(self, t: float) -> Field:
        index = int(np.argmin(np.abs(np.asarray(self.times) - t)))
        return self.snapshots[index]


def evolve(phi: Field, m: float, V: PotentialSpec, dt: float, steps: int, stride: int = 1,
           regularity: float = 0.3) -> TrajectoryRecord:
    """Run ``steps`` Strang steps (negative dt runs backward) and record every ``stride``."""
    grid = phi.grid
    stepper = SplitStepper(grid, m, V, dt)
    record = TrajectoryRecord(regularity=regularity, m=m)
    record.append(0.0, phi, m, V)
    spectrum = phi.spectral().values
    size = SobolevGauge(grid, regularity)
    initial = max(size(spectrum), np.finfo(float).tiny)
    wrap_warned = False
    for step in range(1, steps + 1):
        spectrum = stepper.step(spectrum)
        t = step * dt
        if not np.all(np.isfinite(spectrum)):
            raise NumericalFailure(f"non-finite state at t={t:.6g}", time=t)
        if size(spectrum) > BLOWUP_FACTOR * initial:
            raise NumericalFailure(f"H^{regularity} norm exceeded {BLOWUP_FACTOR:.0e} times its initial value "
                                   f"at t={t:.6g}", time=t)
        if step % stride == 0 or step == steps:
            u = Field._adopt(grid, spectrum, Representation.SPECTRAL)
            record.append(t, u, m, V)
            if not wrap_warned and record.snapshots[-1].boundary_fraction() > WRAP_WARNING_LEVEL:
                message = (f"boundary mass {record.snapshots[-1].boundary_fraction():.2e} exceeds "
                           f"{WRAP_WARNING_LEVEL:.0e} at t={t:.4g}: wrap-around contamination")
                logger.warning(message)
                record.warnings.append(message)
                wrap_warned = True
    return record


@log_execution_time(logger)
def integrate(config: SimulationConfig) -> TrajectoryRecord:
    grid = config.build_grid()
    phi = config.build_initial()
    logger.info(f"integrating on {grid.describe()} for {config.steps} steps of dt={config.dt}")
    return evolve(phi, config.mass, config.build_potential(), config.direction * config.dt,
                  config.steps, config.stride, config.initial.regularity)


def final_state(phi: Field, m: float, V: PotentialSpec, dt: float, horizon: float) -> Field:
    steps = int(round(horizon / dt))
    return evolve(phi, m, V, dt, steps, stride=steps).final


def self_convergence_order(phi: Field, m: float, V: PotentialSpec, dt: float, horizon: float) -> dict:
    """Observed order from three step sizes dt, dt/2, dt/4 (Richardson self-comparison)."""
    coarse = final_state(phi, m, V, dt, horizon)
    medium = final_state(phi, m, V, dt / 2, horizon)
    fine = final_state(phi, m, V, dt / 4, horizon)
    e1 = (coarse - medium).l2_norm()
    e2 = (medium - fine).l2_norm()
    order = float(np.log2(e1 / e2)) if e1 > 0 and e2 > 0 else float('nan')
    return {'dt': dt, 'error_coarse': e1, 'error_fine': e2, 'order': order}
