"""Dirac matrices, the projections Pi_+/- and the free Dirac flow.

Standard (Dirac) basis: beta = diag(1, 1, -1, -1), alpha_i = offdiag(sigma_i, sigma_i).
The spectral magnitude of xi.alpha + m beta is <xi> = (m^2 + |xi|^2)^(1/2).
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np

from lib.angular import hs_norm
from lib.errors import PreconditionError, StructuralError
from lib.spectral import Field, Grid3D

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
_ZERO2 = np.zeros((2, 2), dtype=np.complex128)
_ID2 = np.eye(2, dtype=np.complex128)

ALPHA = tuple(np.block([[_ZERO2, s], [s, _ZERO2]]) for s in PAULI)
BETA = np.block([[_ID2, _ZERO2], [_ZERO2, -_ID2]])
IDENTITY = np.eye(4, dtype=np.complex128)


def verify_algebra() -> None:
    """Anticommutation relations of alpha_1..3 and beta."""
    for i in range(3):
        for j in range(3):
            anti = ALPHA[i] @ ALPHA[j] + ALPHA[j] @ ALPHA[i]
            if not np.allclose(anti, 2.0 * (i == j) * IDENTITY, atol=0):
                raise StructuralError(f"alpha_{i + 1}, alpha_{j + 1} violate the anticommutation rule")
        if not np.allclose(ALPHA[i] @ BETA + BETA @ ALPHA[i], 0, atol=0):
            raise StructuralError(f"alpha_{i + 1} and beta do not anticommute")
    if not np.allclose(BETA @ BETA, IDENTITY, atol=0):
        raise StructuralError("beta^2 != I")


verify_algebra()


def _require_mass(m: float) -> None:
    if not m > 0:
        raise PreconditionError(f"Dirac mass m={m} must be positive", constraint="m > 0")


def dirac_hamiltonian_symbol(xi: Sequence[float], m: float) -> np.ndarray:
    """xi.alpha + m beta at one frequency."""
    xi = np.asarray(xi, dtype=float)
    return xi[0] * ALPHA[0] + xi[1] * ALPHA[1] + xi[2] * ALPHA[2] + m * BETA


def dirac_bracket(xi: Sequence[float], m: float) -> float:
    return float(np.sqrt(m ** 2 + np.dot(xi, xi)))


def dirac_projector(xi: Sequence[float], m: float, sign: int = +1) -> np.ndarray:
    """Pi_sign(xi) = (I + sign * (xi.alpha + m beta) / <xi>) / 2."""
    _require_mass(m)
    if sign not in (+1, -1):
        raise PreconditionError(f"projector sign {sign} must be +1 or -1", constraint="sign in {+1, -1}")
    return 0.5 * (IDENTITY + sign * dirac_hamiltonian_symbol(xi, m) / dirac_bracket(xi, m))


@dataclass(frozen=True)
class DiracData:
    """Four-component spinor field."""
    components: Tuple[Field, Field, Field, Field]
    m: float = 1.0

    def __post_init__(self):
        _require_mass(self.m)
        if len(self.components) != 4:
            raise StructuralError(f"a spinor has 4 components, got {len(self.components)}")
        grid = self.components[0].grid
        if any(c.grid != grid for c in self.components):
            raise StructuralError("spinor components live on different grids")
        object.__setattr__(self, 'components', tuple(self.components))

    @property
    def grid(self) -> Grid3D:
        return self.components[0].grid

    @classmethod
    def from_spectra(cls, grid: Grid3D, spectra: np.ndarray, m: float) -> 'DiracData':
        return cls(tuple(Field._adopt(grid, spectra[a], 'spectral').physical() for a in range(4)), m)

    @classmethod
    def zeros(cls, grid: Grid3D, m: float = 1.0) -> 'DiracData':
        return cls(tuple(Field.zeros(grid) for _ in range(4)), m)

    def spectra(self) -> np.ndarray:
        return np.stack([c.spectral().values for c in self.components])

    def density(self) -> np.ndarray:
        return sum(c.density() for c in self.components)

    def charge(self) -> float:
        """sum_a ||psi_a||^2."""
        return float(sum(c.l2_norm() ** 2 for c in self.components))

    def l2_norm(self) -> float:
        return float(np.sqrt(self.charge()))

    def hs_norm(self, s: float) -> float:
        return float(np.sqrt(sum(hs_norm(c, s) ** 2 for c in self.components)))

    def __add__(self, other: 'DiracData') -> 'DiracData':
        return DiracData(tuple(a + b for a, b in zip(self.components, other.components)), self.m)

    def __sub__(self, other: 'DiracData') -> 'DiracData':
        return DiracData(tuple(a - b for a, b in zip(self.components, other.components)), self.m)


@lru_cache(maxsize=16)
def _hamiltonian_on_grid(grid: Grid3D, m: float) -> Tuple[np.ndarray, np.ndarray]:
    """(xi.alpha + m beta) per lattice point as a (4, 4, n, n, n) array, and <xi>."""
    x1, x2, x3 = (np.broadcast_to(c, grid.shape) for c in grid.xi_axes)
    H = (np.einsum('ab,ijk->abijk', ALPHA[0], x1) + np.einsum('ab,ijk->abijk', ALPHA[1], x2)
         + np.einsum('ab,ijk->abijk', ALPHA[2], x3) + np.einsum('ab,ijk->abijk', BETA * m,
                                                                  np.ones(grid.shape)))
    magnitude = np.sqrt(m ** 2 + grid.xi_norm ** 2)
    H.flags.writeable = False
    return H, magnitude


def _apply_hamiltonian(spectra: np.ndarray, grid: Grid3D, m: float) -> np.ndarray:
    H, _ = _hamiltonian_on_grid(grid, m)
    return np.einsum('abijk,bijk->aijk', H, spectra)


def dirac_split(psi: DiracData) -> Tuple[DiracData, DiracData]:
    """(Pi_+ psi, Pi_- psi) applied pointwise in frequency."""
    grid, m = psi.grid, psi.m
    spectra = psi.spectra()
    _, magnitude = _hamiltonian_on_grid(grid, m)
    signed = _apply_hamiltonian(spectra, grid, m) / magnitude
    plus = 0.5 * (spectra + signed)
    minus = 0.5 * (spectra - signed)
    return DiracData.from_spectra(grid, plus, m), DiracData.from_spectra(grid, minus, m)


def dirac_free_evolve(psi: DiracData, t: float) -> DiracData:
    """exp(-itH) = exp(-it<xi>) Pi_+ + exp(it<xi>) Pi_-."""
    if t == 0:
        return psi
    grid, m = psi.grid, psi.m
    spectra = psi.spectra()
    _, magnitude = _hamiltonian_on_grid(grid, m)
    signed = _apply_hamiltonian(spectra, grid, m) / magnitude
    evolved = np.cos(t * magnitude) * spectra - 1j * np.sin(t * magnitude) * signed
    return DiracData.from_spectra(grid, evolved, m)


def projection_norm_ratio(psi: DiracData, s: float) -> float:
    """(||Pi_+ psi||_{H^s} + ||Pi_- psi||_{H^s}) / ||psi||_{H^s}; lies in [1, 2]."""
    plus, minus = dirac_split(psi)
    total = psi.hs_norm(s)
    if total == 0:
        return 1.0
    return (plus.hs_norm(s) + minus.hs_norm(s)) / total


def random_spinor(grid: Grid3D, m: float, rng: np.random.Generator,
                  width: Optional[float] = None) -> DiracData:
    """Smooth random spinor: complex noise under a Gaussian envelope, dealiased."""
    width = grid.L / 8.0 if width is None else width
    envelope = np.exp(-grid.radius ** 2 / (2.0 * width ** 2))
    components = []
    for _ in range(4):
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        spectrum = Field(grid, noise * envelope).spectral()
        components.append(spectrum.with_values(spectrum.values * grid.dealias_mask).physical())
    return DiracData(tuple(components), m)
