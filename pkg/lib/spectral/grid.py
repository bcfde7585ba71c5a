"""Periodic box discretization of R^3."""
from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from lib.errors import PreconditionError


def _is_fft_friendly(n: int) -> bool:
    for p in (2, 3, 5):
        while n % p == 0 and n > 1:
            n //= p
    return n == 1


@dataclass(frozen=True)
class Grid3D:
    """Cubic torus of side ``L`` sampled with ``n`` points per axis.

    Physical coordinates are centered, ``x_j = -L/2 + j*dx``. Spectral arrays
    are stored in FFT order, so index ``k`` along an axis carries the integer
    wavenumber ``fftfreq(n)*n`` and the frequency ``2*pi*k/L``.
    """
    n: int
    L: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 8 or self.n % 2:
            raise PreconditionError(f"grid size n must be even and >= 8, got {self.n}",
                                    constraint="n even, n >= 8")
        if not _is_fft_friendly(int(self.n)):
            raise PreconditionError(f"grid size n={self.n} must only have factors 2, 3, 5",
                                    constraint="n 5-smooth")
        if not self.L > 0:
            raise PreconditionError(f"box length L must be positive, got {self.L}",
                                    constraint="L > 0")
        object.__setattr__(self, 'n', int(self.n))
        object.__setattr__(self, 'L', float(self.L))

    @property
    def shape(self) -> Tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @property
    def dx(self) -> float:
        return self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.dx ** 3

    @property
    def volume(self) -> float:
        return self.L ** 3

    @property
    def xi_max(self) -> float:
        """Largest resolved frequency along an axis, pi*n/L."""
        return np.pi * self.n / self.L

    @property
    def max_lattice_frequency(self) -> float:
        """Largest |xi| on the lattice (cube corner)."""
        return float(np.sqrt(3.0) * self.xi_max)

    @property
    def fundamental(self) -> float:
        return 2.0 * np.pi / self.L

    @cached_property
    def x_axis(self) -> np.ndarray:
        return -0.5 * self.L + self.dx * np.arange(self.n)

    @cached_property
    def coords(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = self.x_axis
        return x[:, None, None], x[None, :, None], x[None, None, :]

    @cached_property
    def radius(self) -> np.ndarray:
        x1, x2, x3 = self.coords
        return np.sqrt(x1 ** 2 + x2 ** 2 + x3 ** 2)

    @cached_property
    def k_axis(self) -> np.ndarray:
        return np.rint(np.fft.fftfreq(self.n) * self.n).astype(np.int64)

    @cached_property
    def xi_axis(self) -> np.ndarray:
        return self.fundamental * self.k_axis

    @cached_property
    def xi_axes(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        xi = self.xi_axis
        return xi[:, None, None], xi[None, :, None], xi[None, None, :]

    @cached_property
    def xi_norm(self) -> np.ndarray:
        x1, x2, x3 = self.xi_axes
        return np.sqrt(x1 ** 2 + x2 ** 2 + x3 ** 2)

    @cached_property
    def k_squared(self) -> np.ndarray:
        """Integer |k|^2 per lattice point; radial symbols are functions of it."""
        k = self.k_axis
        return k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2

    @cached_property
    def parity_sign(self) -> np.ndarray:
        """(-1)^(k1+k2+k3): the phase that centers the physical coordinates."""
        k = self.k_axis
        parity = (k[:, None, None] + k[None, :, None] + k[None, None, :]) % 2
        return 1.0 - 2.0 * parity

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        keep = np.abs(self.k_axis) <= self.n / 3.0
        return keep[:, None, None] & keep[None, :, None] & keep[None, None, :]

    def boundary_mask(self, width: int = 2) -> np.ndarray:
        """Points within ``width`` cells of the box faces."""
        edge = np.abs(self.x_axis) >= 0.5 * self.L - width * self.dx - 1e-12 * self.L
        return edge[:, None, None] | edge[None, :, None] | edge[None, None, :]

    def plane_wave(self, k: Tuple[int, int, int]) -> np.ndarray:
        """Physical samples of exp(i x . xi_k) for integer wavenumber ``k``."""
        x1, x2, x3 = self.coords
        xi = self.fundamental * np.asarray(k, dtype=float)
        return np.exp(1j * (x1 * xi[0] + x2 * xi[1] + x3 * xi[2]))

    def lattice_index(self, flat_index: int) -> Tuple[int, int, int]:
        """Integer wavenumber triple of a flat spectral index."""
        i, j, l = np.unravel_index(flat_index, self.shape)
        return int(self.k_axis[i]), int(self.k_axis[j]), int(self.k_axis[l])

    def describe(self) -> dict:
        return {'n': self.n, 'L': self.L, 'dx': self.dx, 'xi_max': self.xi_max}
