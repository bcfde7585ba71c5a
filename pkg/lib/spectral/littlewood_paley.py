"""Dyadic Littlewood-Paley cutoffs and projectors.

Scales are physical frequencies (inverse length) and always powers of two. The
inhomogeneous decomposition lumps every frequency below ``N0`` into one band.
"""
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import List

import numpy as np

from lib.errors import PreconditionError
from lib.spectral.field import Field
from lib.spectral.grid import Grid3D
from lib.spectral.multipliers import radial_levels
from utils.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_N0 = 8.0


def _psi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t, dtype=float)
    positive = t > 0
    out[positive] = np.exp(-1.0 / t[positive])
    return out


def cutoff_profile(s) -> np.ndarray:
    """Smooth even bump: 1 on |s| <= 1, 0 on |s| >= 2, monotone in between."""
    a = np.abs(np.asarray(s, dtype=float))
    flat = np.atleast_1d(a).ravel()
    out = np.where(flat <= 1.0, 1.0, 0.0)
    middle = (flat > 1.0) & (flat < 2.0)
    left = _psi(2.0 - flat[middle])
    right = _psi(flat[middle] - 1.0)
    out[middle] = left / (left + right)
    return out.reshape(a.shape)


def is_dyadic(scale: float) -> bool:
    if not scale > 0 or not np.isfinite(scale):
        return False
    exponent = np.log2(scale)
    return abs(exponent - round(exponent)) < 1e-12


def _require_dyadic(scale: float, label: str = 'M') -> None:
    if not is_dyadic(scale):
        raise PreconditionError(f"{label}={scale} is not a dyadic number 2^m",
                                constraint=f"{label} dyadic")


def chi(M: float, s) -> np.ndarray:
    """chi_M(s) = rho(s/M) - rho(2s/M), supported in M/2 < |s| < 2M."""
    _require_dyadic(M)
    s = np.asarray(s, dtype=float)
    return cutoff_profile(s / M) - cutoff_profile(2.0 * s / M)


def chi_tilde(M: float, s) -> np.ndarray:
    """chi_M(s/2) + chi_M(s) + chi_M(2s), telescoped."""
    _require_dyadic(M)
    s = np.asarray(s, dtype=float)
    return cutoff_profile(s / (2.0 * M)) - cutoff_profile(4.0 * s / M)


def beta(N: float, s, N0: float = DEFAULT_N0) -> np.ndarray:
    """beta_N0 = rho(s/N0) collects all chi_M with M <= N0; beta_N = chi_N above N0."""
    _require_dyadic(N, 'N')
    _require_dyadic(N0, 'N0')
    if N < N0:
        raise PreconditionError(f"inhomogeneous band N={N} lies below N0={N0}",
                                constraint="N >= N0")
    if N == N0:
        return cutoff_profile(np.asarray(s, dtype=float) / N0)
    return chi(N, s)


def beta_tilde(N: float, s, N0: float = DEFAULT_N0) -> np.ndarray:
    if N == N0:
        _require_dyadic(N0, 'N0')
        return cutoff_profile(np.asarray(s, dtype=float) / (2.0 * N0))
    beta(N, 0.0, N0)
    return chi_tilde(N, s)


class BandKind(str, Enum):
    HOMOGENEOUS = 'homogeneous'
    INHOMOGENEOUS = 'inhomogeneous'
    LOW = 'low'


@dataclass(frozen=True)
class DyadicBand:
    scale: float
    kind: BandKind = BandKind.HOMOGENEOUS
    widened: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'scale', float(self.scale))
        object.__setattr__(self, 'kind', BandKind(self.kind))
        _require_dyadic(self.scale, 'band scale')

    @classmethod
    def homogeneous(cls, M: float, widened: bool = False) -> 'DyadicBand':
        return cls(M, BandKind.HOMOGENEOUS, widened)

    @classmethod
    def inhomogeneous(cls, N: float, N0: float = DEFAULT_N0, widened: bool = False) -> 'DyadicBand':
        _require_dyadic(N0, 'N0')
        if N < N0:
            raise PreconditionError(f"inhomogeneous band N={N} lies below N0={N0}",
                                    constraint="N >= N0")
        kind = BandKind.LOW if N == N0 else BandKind.INHOMOGENEOUS
        return cls(N, kind, widened)

    def widen(self) -> 'DyadicBand':
        return DyadicBand(self.scale, self.kind, True)

    def symbol(self, s) -> np.ndarray:
        if self.kind is BandKind.LOW:
            factor = 2.0 if self.widened else 1.0
            return cutoff_profile(np.asarray(s, dtype=float) / (factor * self.scale))
        return chi_tilde(self.scale, s) if self.widened else chi(self.scale, s)

    @property
    def lower_edge(self) -> float:
        if self.kind is BandKind.LOW:
            return 0.0
        return self.scale / (4.0 if self.widened else 2.0)

    @property
    def upper_edge(self) -> float:
        return self.scale * (4.0 if self.widened else 2.0)

    def label(self) -> dict:
        return {'kind': self.kind.value, 'scale': self.scale, 'widened': self.widened}


@lru_cache(maxsize=256)
def band_symbol(grid: Grid3D, band: DyadicBand) -> np.ndarray:
    radii, inverse = radial_levels(grid)
    symbol = np.asarray(band.symbol(radii), dtype=float)[inverse]
    symbol.flags.writeable = False
    return symbol


def project(f: Field, band: DyadicBand) -> Field:
    """Multiply the spectrum by the band symbol evaluated at |xi|."""
    if band.lower_edge >= f.grid.max_lattice_frequency:
        logger.warning(f"band {band.label()} lies above every lattice frequency "
                       f"(max {f.grid.max_lattice_frequency:.4g}); returning zero field")
        return Field.zeros(f.grid, f.representation)
    spectrum = f.spectral()
    projected = spectrum.with_values(spectrum.values * band_symbol(f.grid, band))
    return projected.as_representation(f.representation)


def top_scale(grid: Grid3D, N0: float = DEFAULT_N0) -> float:
    """Smallest N0*2^j covering the cube corner of the lattice."""
    _require_dyadic(N0, 'N0')
    N = N0
    while N < grid.max_lattice_frequency:
        N *= 2.0
    return N


def resolved_bands(grid: Grid3D, N0: float = DEFAULT_N0) -> List[DyadicBand]:
    """Inhomogeneous bands N0, 2N0, ... whose symbols sum to one on the lattice."""
    bands = [DyadicBand.inhomogeneous(N0, N0)]
    N = N0
    top = top_scale(grid, N0)
    while N < top:
        N *= 2.0
        bands.append(DyadicBand.inhomogeneous(N, N0))
    return bands


def homogeneous_bands(grid: Grid3D) -> List[DyadicBand]:
    """Dyadic M from the largest power of two <= the fundamental up to the corner."""
    M = 2.0 ** np.floor(np.log2(grid.fundamental))
    top = 2.0 ** np.ceil(np.log2(grid.max_lattice_frequency))
    bands = []
    while M <= top:
        bands.append(DyadicBand.homogeneous(M))
        M *= 2.0
    return bands


def decompose(f: Field, N0: float = DEFAULT_N0) -> List[Field]:
    return [project(f, band) for band in resolved_bands(f.grid, N0)]


def reconstruct(pieces: List[Field]) -> Field:
    total = pieces[0]
    for piece in pieces[1:]:
        total = total + piece
    return total


def partition_of_unity_defect(grid: Grid3D, N0: float = DEFAULT_N0) -> float:
    """max |sum_N beta_N(|xi|) - 1| over the lattice."""
    total = np.zeros(grid.shape)
    for band in resolved_bands(grid, N0):
        total = total + band_symbol(grid, band)
    return float(np.abs(total - 1.0).max())


def manifest_entries(bands: List[DyadicBand]) -> List[dict]:
    return [band.label() for band in bands]
