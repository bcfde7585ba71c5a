import numpy as np
import pytest

from lib.spectral import Field, Grid3D
from tests.helpers import random_field


@pytest.fixture
def small_grid() -> Grid3D:
    return Grid3D(16, 16.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def smooth_field(small_grid, rng) -> Field:
    return random_field(small_grid, rng)
