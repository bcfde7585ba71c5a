"""Test data builders shared by the test modules."""
import numpy as np

from lib.spectral import Field, Grid3D, dealias


def gaussian_field(grid: Grid3D, width: float = 1.0, center=(0.0, 0.0, 0.0)) -> Field:
    x1, x2, x3 = grid.coords
    c1, c2, c3 = center
    r2 = (x1 - c1) ** 2 + (x2 - c2) ** 2 + (x3 - c3) ** 2
    return Field(grid, np.exp(-r2 / (2.0 * width ** 2)))


def random_field(grid: Grid3D, rng: np.random.Generator, width: float = None) -> Field:
    """Dealiased complex noise under a Gaussian envelope."""
    width = grid.L / 8.0 if width is None else width
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return dealias(Field(grid, noise * np.exp(-grid.radius ** 2 / (2.0 * width ** 2))))
