"""Validated simulation parameters."""
from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field as PydanticField, model_validator

from lib.angular import hs1_norm
from lib.errors import PreconditionError
from lib.potentials import PotentialKind, PotentialSpec
from lib.spectral import Field, Grid3D

MAX_STEP_PHASE = 0.5


def step_phase(grid: Grid3D, mass: float, dt: float) -> float:
    """|dt| times the largest dispersion frequency on the lattice."""
    return abs(dt) * float(np.sqrt(mass + grid.max_lattice_frequency ** 2))


class StrictModel(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class GridConfig(StrictModel):
    n: int = 48
    L: float = 32.0

    @model_validator(mode='after')
    def _check_grid(self):
        try:
            Grid3D(self.n, self.L)
        except PreconditionError as e:
            raise ValueError(e.message) from e
        return self

    def build(self) -> Grid3D:
        return Grid3D(self.n, self.L)


class PotentialConfig(StrictModel):
    kind: Literal['yukawa', 'coulomb', 'power'] = 'yukawa'
    mu0: float = 1.0
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    gamma: float = 1.0

    @model_validator(mode='after')
    def _check_potential(self):
        try:
            self.build()
        except PreconditionError as e:
            raise ValueError(e.message) from e
        return self

    def build(self) -> PotentialSpec:
        return PotentialSpec(kind=PotentialKind(self.kind), mu0=self.mu0, gamma1=self.gamma1,
                             gamma2=self.gamma2, gamma=self.gamma)


class InitialData(StrictModel):
    """Initial datum normalized to ||phi||_{H^{s,1}} = amplitude.

    ``gaussian`` is radial; ``dipole`` is x1 * gaussian shifted by ``center``;
    ``random`` is seeded, dealiased noise under a Gaussian envelope.
    """
    profile: Literal['gaussian', 'dipole', 'random'] = 'gaussian'
    amplitude: float = PydanticField(0.01, gt=0)
    regularity: float = PydanticField(0.3, ge=0, le=4)
    width: float = PydanticField(2.0, gt=0)
    center: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    momentum: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def shape(self, grid: Grid3D, seed: int) -> Field:
        """Unnormalized profile."""
        x1, x2, x3 = grid.coords
        c1, c2, c3 = self.center
        r2 = (x1 - c1) ** 2 + (x2 - c2) ** 2 + (x3 - c3) ** 2
        envelope = np.exp(-r2 / (2.0 * self.width ** 2))
        if self.profile == 'dipole':
            values = (x1 - c1) * envelope
        elif self.profile == 'random':
            rng = np.random.default_rng(seed)
            noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
            values = noise * envelope
        else:
            values = envelope.astype(np.complex128)
        k1, k2, k3 = self.momentum
        if any(self.momentum):
            values = values * np.exp(1j * (k1 * x1 + k2 * x2 + k3 * x3))
        spectrum = Field(grid, values).spectral()
        return spectrum.with_values(spectrum.values * grid.dealias_mask).physical()

    def build(self, grid: Grid3D, seed: int) -> Field:
        profile = self.shape(grid, seed)
        return profile * (self.amplitude / hs1_norm(profile, self.regularity))


class SimulationConfig(StrictModel):
    grid: GridConfig = GridConfig()
    mass: float = PydanticField(1.0, gt=0)
    potential: PotentialConfig = PotentialConfig()
    initial: InitialData = InitialData()
    dt: float = PydanticField(0.01, gt=0)
    horizon: float = PydanticField(10.0, gt=0)
    stride: int = PydanticField(10, ge=1)
    seed: int = 0
    theorem_mode: bool = False
    direction: Literal[1, -1] = 1

    @model_validator(mode='after')
    def _check_guards(self):
        grid = self.grid.build()
        phase = step_phase(grid, self.mass, self.dt)
        if phase > MAX_STEP_PHASE:
            raise ValueError(f"dt * max omega = {phase:.3f} exceeds {MAX_STEP_PHASE} "
                             f"(max omega {phase / self.dt:.3f}); reduce dt")
        steps = self.horizon / self.dt
        if abs(steps - round(steps)) > 1e-6 * max(steps, 1.0):
            raise ValueError(f"horizon {self.horizon} is not a multiple of dt {self.dt}")
        if self.theorem_mode:
            potential = self.potential.build()
            if not potential.theorem_admissible():
                raise ValueError(f"theorem mode needs gamma1 < 1 and 3/2 < gamma2 < 3, "
                                 f"got ({potential.gamma1}, {potential.gamma2})")
            if not self.initial.regularity > 0.25:
                raise ValueError(f"theorem mode needs s > 1/4, got s={self.initial.regularity}")
        return self

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.dt))

    def build_grid(self) -> Grid3D:
        return self.grid.build()

    def build_potential(self) -> PotentialSpec:
        return self.potential.build()

    def build_initial(self) -> Field:
        return self.initial.build(self.build_grid(), self.seed)
