"""Fourier multipliers, convolution and dealiasing on a Grid3D."""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np

from lib.errors import DomainError, StructuralError
from lib.spectral.field import Field, Representation
from lib.spectral.grid import Grid3D


@lru_cache(maxsize=32)
def radial_levels(grid: Grid3D) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct lattice radii |xi| and the index mapping every point to its radius.

    Radial symbols are evaluated once per radius so values on a lattice orbit are
    bit-identical.
    """
    levels, inverse = np.unique(grid.k_squared.ravel(), return_inverse=True)
    radii = grid.fundamental * np.sqrt(levels.astype(float))
    return radii, inverse.reshape(grid.shape)


@dataclass(frozen=True, eq=False)
class MultiplierSpec:
    """Evaluation rule for a Fourier multiplier.

    A radial rule is called with |xi|; any other rule with the three broadcast
    frequency components. ``zero_mode`` replaces the value at xi = 0 when set.
    """
    rule: Callable
    radial: bool = True
    name: str = 'multiplier'
    zero_mode: Optional[complex] = None
    options: dict = field(default_factory=dict)

    def evaluate(self, grid: Grid3D) -> np.ndarray:
        return _evaluate(self, grid)

    def at(self, xi: np.ndarray) -> complex:
        """Value at a single frequency vector (no zero-mode policy)."""
        xi = np.asarray(xi, dtype=float)
        if self.radial:
            return complex(self.rule(np.array(np.linalg.norm(xi))))
        return complex(self.rule(*[np.array(c) for c in xi]))


@lru_cache(maxsize=32)
def _evaluate(spec: MultiplierSpec, grid: Grid3D) -> np.ndarray:
    with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
        if spec.radial:
            radii, inverse = radial_levels(grid)
            values = np.asarray(spec.rule(radii), dtype=np.complex128)
            if values.ndim == 0:
                values = np.full(radii.shape, values)
            symbol = values[inverse]
        else:
            symbol = np.asarray(spec.rule(*grid.xi_axes), dtype=np.complex128)
            symbol = np.array(np.broadcast_to(symbol, grid.shape))
    if spec.zero_mode is not None:
        symbol[0, 0, 0] = spec.zero_mode
    bad = ~np.isfinite(symbol)
    if bad.any():
        point = grid.lattice_index(int(np.flatnonzero(bad)[0]))
        raise DomainError(f"{spec.name} is not finite at lattice point k={point}", point=point)
    symbol.flags.writeable = False
    return symbol


def _gradient_spec(axis: int) -> MultiplierSpec:
    def rule(x1, x2, x3):
        return 1j * (x1, x2, x3)[axis]
    return MultiplierSpec(rule=rule, radial=False, name=f'd/dx{axis + 1}')


# one spec per axis, so repeated gradients reuse the cached symbols
_GRADIENTS = tuple(_gradient_spec(axis) for axis in range(3))


def gradient_multiplier(axis: int) -> MultiplierSpec:
    """i*xi_axis, the symbol of d/dx_axis."""
    return _GRADIENTS[axis]


@lru_cache(maxsize=16)
def bessel_multiplier(s: float) -> MultiplierSpec:
    """(1+|xi|^2)^(s/2)."""
    return MultiplierSpec(rule=lambda r: (1.0 + r ** 2) ** (0.5 * s), radial=True,
                          name=f'bessel[{s}]')


SymbolLike = Union[MultiplierSpec, np.ndarray]


def apply_multiplier(f: Field, m: SymbolLike) -> Field:
    """Multiply the spectrum of ``f`` by ``m``; the result keeps f's representation."""
    symbol = m.evaluate(f.grid) if isinstance(m, MultiplierSpec) else np.asarray(m)
    spectrum = f.spectral()
    result = spectrum.with_values(symbol * spectrum.values)
    return result.as_representation(f.representation)


def convolve(f: Field, g: Field) -> Field:
    """Continuum-weighted periodic convolution, (f*g)^ = f^ g^."""
    if f.grid != g.grid:
        raise StructuralError(f"grid mismatch: {f.grid} vs {g.grid}")
    spectrum = f.spectral().values * g.spectral().values
    return Field._adopt(f.grid, spectrum, Representation.SPECTRAL).as_representation(f.representation)


def dealias(f: Field) -> Field:
    """Two-thirds rule: zero every mode with some |k_i| > n/3."""
    spectrum = f.spectral()
    return spectrum.with_values(spectrum.values * f.grid.dealias_mask).as_representation(f.representation)


def gradient(f: Field) -> Tuple[Field, Field, Field]:
    return tuple(apply_multiplier(f, spec) for spec in _GRADIENTS)
