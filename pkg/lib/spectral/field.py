"""Complex scalar fields on a Grid3D and the continuum-normalized transform."""
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Union

import numpy as np
import pandas as pd
import scipy.fft as sfft

from lib.errors import StructuralError
from lib.spectral.grid import Grid3D

_FFT_WORKERS = 1
_MAGIC = b'HLF1'
_HEADER = struct.Struct('<qdB')


def set_fft_workers(workers: int) -> None:
    """Cap the worker threads used by every transform in this process."""
    global _FFT_WORKERS
    _FFT_WORKERS = max(1, int(workers))


class Representation(str, Enum):
    PHYSICAL = 'physical'
    SPECTRAL = 'spectral'


class Direction(str, Enum):
    FORWARD = 'forward'
    INVERSE = 'inverse'


@dataclass(frozen=True, eq=False)
class Field:
    """Immutable complex field tagged with its representation.

    Spectral values follow the continuum convention
    ``f_hat(xi) = int exp(-i x.xi) f(x) dx`` discretized with weight dx^3.
    """
    grid: Grid3D
    values: np.ndarray
    representation: Representation = Representation.PHYSICAL

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        if values.shape != self.grid.shape:
            raise StructuralError(
                f"field of shape {values.shape} does not fit grid {self.grid.shape}")
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'representation', Representation(self.representation))

    @classmethod
    def _adopt(cls, grid: Grid3D, values: np.ndarray, representation: Representation) -> 'Field':
        # Takes ownership of a freshly computed array without copying it.
        if values.shape != grid.shape:
            raise StructuralError(f"field of shape {values.shape} does not fit grid {grid.shape}")
        field = object.__new__(cls)
        values = np.asarray(values, dtype=np.complex128)
        values.flags.writeable = False
        object.__setattr__(field, 'grid', grid)
        object.__setattr__(field, 'values', values)
        object.__setattr__(field, 'representation', Representation(representation))
        return field

    @classmethod
    def zeros(cls, grid: Grid3D, representation: Representation = Representation.PHYSICAL) -> 'Field':
        return cls._adopt(grid, np.zeros(grid.shape, dtype=np.complex128), representation)

    @classmethod
    def from_function(cls, grid: Grid3D, func: Callable) -> 'Field':
        """Sample ``func(x1, x2, x3)`` on the centered physical coordinates."""
        x1, x2, x3 = grid.coords
        values = np.broadcast_to(func(x1, x2, x3), grid.shape)
        return cls._adopt(grid, np.array(values, dtype=np.complex128), Representation.PHYSICAL)

    @classmethod
    def from_radial_symbol(cls, grid: Grid3D, symbol: Callable) -> 'Field':
        """Field whose spectral values are ``symbol(|xi|)`` on the lattice."""
        values = np.array(symbol(grid.xi_norm), dtype=np.complex128)
        return cls._adopt(grid, values, Representation.SPECTRAL)

    @property
    def is_spectral(self) -> bool:
        return self.representation is Representation.SPECTRAL

    def with_values(self, values: np.ndarray) -> 'Field':
        return Field._adopt(self.grid, values, self.representation)

    def physical(self) -> 'Field':
        return transform(self, Direction.INVERSE) if self.is_spectral else self

    def spectral(self) -> 'Field':
        return self if self.is_spectral else transform(self, Direction.FORWARD)

    def as_representation(self, representation: Representation) -> 'Field':
        if Representation(representation) is Representation.SPECTRAL:
            return self.spectral()
        return self.physical()

    def _check_compatible(self, other: 'Field') -> None:
        if other.grid != self.grid:
            raise StructuralError(f"grid mismatch: {self.grid} vs {other.grid}")

    def _binary(self, other, op) -> 'Field':
        if isinstance(other, Field):
            self._check_compatible(other)
            other_values = other.as_representation(self.representation).values
            return self.with_values(op(self.values, other_values))
        return self.with_values(op(self.values, other))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, other):
        if isinstance(other, Field):
            # pointwise products are taken in physical space
            self._check_compatible(other)
            return Field._adopt(self.grid, self.physical().values * other.physical().values,
                                Representation.PHYSICAL)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return self.with_values(self.values / scalar)

    def conj(self) -> 'Field':
        return Field._adopt(self.grid, np.conj(self.physical().values), Representation.PHYSICAL)

    def density(self) -> np.ndarray:
        """|f|^2 in physical space."""
        values = self.physical().values
        return values.real ** 2 + values.imag ** 2

    def l2_norm(self) -> float:
        if self.is_spectral:
            return float(np.sqrt(np.sum(np.abs(self.values) ** 2) / self.grid.volume))
        return float(np.sqrt(self.grid.cell_volume * np.sum(self.density())))

    def lp_norm(self, p: float) -> float:
        magnitude = np.abs(self.physical().values)
        if np.isinf(p):
            return float(magnitude.max())
        return float((self.grid.cell_volume * np.sum(magnitude ** p)) ** (1.0 / p))

    def inner(self, other: 'Field') -> complex:
        """<f, g> = int f conj(g) dx, evaluated in spectral space."""
        self._check_compatible(other)
        a = self.spectral().values
        b = other.spectral().values
        return complex(np.vdot(b, a) / self.grid.volume)

    def max_abs(self) -> float:
        return float(np.abs(self.values).max())

    def boundary_fraction(self, width: int = 2) -> float:
        """Share of the L^2 mass sitting within ``width`` cells of the faces."""
        density = self.density()
        total = density.sum()
        if total == 0:
            return 0.0
        return float(density[self.grid.boundary_mask(width)].sum() / total)

    def boundary_decay(self, width: int = 2) -> float:
        """max |f| near the faces relative to max |f|."""
        magnitude = np.abs(self.physical().values)
        peak = magnitude.max()
        if peak == 0:
            return 0.0
        return float(magnitude[self.grid.boundary_mask(width)].max() / peak)

    def to_bytes(self) -> bytes:
        values = self.values
        if self.is_spectral:
            values = np.fft.fftshift(values)
        tag = 1 if self.is_spectral else 0
        body = np.ascontiguousarray(values).astype('<c16').tobytes()
        return _MAGIC + _HEADER.pack(self.grid.n, self.grid.L, tag) + body

    @classmethod
    def from_bytes(cls, payload: bytes) -> 'Field':
        if payload[:4] != _MAGIC:
            raise StructuralError("not a field payload")
        n, L, tag = _HEADER.unpack_from(payload, 4)
        grid = Grid3D(n, L)
        offset = 4 + _HEADER.size
        expected = n ** 3 * 16
        if len(payload) - offset != expected:
            raise StructuralError(f"field body has {len(payload) - offset} bytes, expected {expected}")
        values = np.frombuffer(payload, dtype='<c16', offset=offset).reshape(grid.shape)
        representation = Representation.SPECTRAL if tag == 1 else Representation.PHYSICAL
        if tag == 1:
            values = np.fft.ifftshift(values)
        return cls._adopt(grid, np.array(values, dtype=np.complex128), representation)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_bytes(self.to_bytes())
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'Field':
        return cls.from_bytes(Path(path).read_bytes())

    def to_frame(self) -> pd.DataFrame:
        """Long table of samples, rows in row-major order of the stored layout."""
        grid = self.grid
        if self.is_spectral:
            axis = np.fft.fftshift(grid.xi_axis)
            values = np.fft.fftshift(self.values)
            names = ('xi1', 'xi2', 'xi3')
        else:
            axis = grid.x_axis
            values = self.values
            names = ('x1', 'x2', 'x3')
        a1, a2, a3 = np.meshgrid(axis, axis, axis, indexing='ij')
        return pd.DataFrame({
            names[0]: a1.ravel(), names[1]: a2.ravel(), names[2]: a3.ravel(),
            're': values.real.ravel(), 'im': values.imag.ravel(),
        })


def transform(f: Field, direction: Union[Direction, str]) -> Field:
    """Forward: dx^3 sum_j f(x_j) e^{-i x_j.xi_k}; inverse: L^-3 sum_k f_hat e^{i x_j.xi_k}."""
    direction = Direction(direction)
    grid = f.grid
    if f.values.shape != grid.shape:
        raise StructuralError(f"field of shape {f.values.shape} does not fit grid {grid.shape}")
    if direction is Direction.FORWARD:
        if f.is_spectral:
            raise StructuralError("forward transform expects a physical field")
        values = sfft.fftn(f.values, workers=_FFT_WORKERS)
        values *= grid.cell_volume * grid.parity_sign
        return Field._adopt(grid, values, Representation.SPECTRAL)
    if not f.is_spectral:
        raise StructuralError("inverse transform expects a spectral field")
    values = sfft.ifftn(f.values * grid.parity_sign, workers=_FFT_WORKERS)
    values /= grid.cell_volume
    return Field._adopt(grid, values, Representation.PHYSICAL)
