"""Sampled probe of the trilinear space-time estimate behind the contraction argument."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.stats import linregress

from lib.angular import spherical_gradient
from lib.ensemble import run_ensemble
from lib.errors import PreconditionError
from lib.evolution.hartree import trilinear_force
from lib.potentials import PotentialSpec
from lib.propagators.free_flow import free_samples
from lib.propagators.strichartz import band_data, window_times
from lib.spectral import DEFAULT_N0, DyadicBand, Field, Grid3D
from utils.logger import log_execution_time, setup_logger

logger = setup_logger(__name__)

Tuple4 = Tuple[float, float, float, float]
HIGH_REGIME_FACTOR = 0.25


def check_exponent(r: float, s: float, V: PotentialSpec) -> None:
    """1/4 < 1/r < min(s, gamma2/6, 3/10); the message names the binding constraint."""
    inverse = 1.0 / r
    if not inverse > 0.25:
        raise PreconditionError(f"r={r} must satisfy 1/4 < 1/r < min(s, gamma2/6, 3/10): 1/r <= 1/4",
                                constraint="1/r > 1/4")
    bounds = {'s': s, 'gamma2/6': V.gamma2 / 6.0, '3/10': 0.3}
    name, bound = min(bounds.items(), key=lambda item: item[1])
    if not inverse < bound:
        raise PreconditionError(
            f"r={r} must satisfy 1/4 < 1/r < min(s, gamma2/6, 3/10): 1/r={inverse:.4f} >= {name}={bound:.4f}",
            constraint=f"1/r < {name}")


def bound_constant(N1: float, N2: float, N3: float, N: float, r: float) -> float:
    if N3 >= HIGH_REGIME_FACTOR * N:
        return (N1 * N2) ** (1.0 / r)
    return (min(N1, N2) * N3) ** (1.0 / r)


def space_time_pairing(u1: Sequence[Field], u2: Sequence[Field], u3: Sequence[Field],
                       v: Sequence[Field], times: np.ndarray, V: PotentialSpec) -> complex:
    """int int [V * (u1 conj u2)] u3 conj(v) dx dt by trapezoid in time."""
    values = np.array([
        complex(trilinear_force(a, b, c, V).inner(d))
        for a, b, c, d in zip(u1, u2, u3, v)
    ])
    return complex(trapezoid(values, times))


def _angular_norm(phi: Field) -> float:
    return float(np.sqrt(sum(c.l2_norm() ** 2 for c in spherical_gradient(phi))))


@dataclass
class TrilinearRow:
    bands: Tuple4
    r: float
    constant: float
    ratios: List[float]

    @property
    def max_ratio(self) -> float:
        return float(max(self.ratios)) if self.ratios else 0.0

    def as_dict(self) -> dict:
        N1, N2, N3, N = self.bands
        return {'N1': N1, 'N2': N2, 'N3': N3, 'N': N, 'r': self.r, 'constant': self.constant,
                'max_ratio': self.max_ratio, 'mean_ratio': float(np.mean(self.ratios)) if self.ratios else 0.0}


@dataclass
class TrilinearReport:
    rows: List[TrilinearRow]
    slope: float
    tolerance: float
    parameters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.slope) and self.slope <= self.tolerance)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.as_dict() for row in self.rows])

    def summary(self) -> dict:
        return {'slope': self.slope, 'tolerance': self.tolerance, 'passed': self.passed,
                'tuples': len(self.rows), 'parameters': self.parameters}


def _slot_factors(phi: Field, angular: bool) -> List[Field]:
    return list(spherical_gradient(phi)) if angular else [phi]


def tuple_ratios(grid: Grid3D, bands: Tuple4, m: float, V: PotentialSpec, r: float,
                 ensemble: int, seed, samples: int, window: Optional[float],
                 N0: float, angular_slot: Optional[int]) -> TrilinearRow:
    times = window_times(grid, samples, window)
    constant = bound_constant(*bands, r)
    dyadic = [DyadicBand.inhomogeneous(N, N0) for N in bands]

    def trial(rng, index):
        data = [band_data(grid, band, rng) for band in dyadic]
        norms = [d.l2_norm() + _angular_norm(d) for d in data[:3]] + [data[3].l2_norm()]
        if min(norms) == 0:
            return 0.0
        flows = [free_samples(d, times, m) for d in data]
        factors = []
        for slot in range(3):
            variants = _slot_factors(data[slot], angular_slot == slot + 1)
            factors.append([free_samples(variant, times, m) for variant in variants]
                           if len(variants) > 1 else [flows[slot]])
        total = 0.0
        for f1 in factors[0]:
            for f2 in factors[1]:
                for f3 in factors[2]:
                    total += abs(space_time_pairing(f1, f2, f3, flows[3], times, V)) ** 2
        return float(np.sqrt(total)) / (np.prod(norms) * constant)

    return TrilinearRow(tuple(bands), r, constant, run_ensemble(trial, ensemble, seed))


def default_tuples(N_values: Sequence[float], low: float, count: int = 8) -> List[Tuple4]:
    """Equal-band family (N, N, N, N) and low-N3 family (low, N, low, N)."""
    equal = [(N, N, N, N) for N in N_values][:count]
    split = [(low, N, low, N) for N in N_values if low < HIGH_REGIME_FACTOR * N][:count]
    return equal + split


@log_execution_time(logger)
def trilinear_probe(grid: Grid3D, tuples: Sequence[Tuple4], m: float, V: PotentialSpec, r: float,
                    s: float = 0.3, ensemble: int = 8, seed: int = 0, samples: int = 33,
                    window: Optional[float] = None, N0: float = DEFAULT_N0,
                    angular_slot: Optional[int] = None, tolerance: float = 0.1) -> TrilinearReport:
    """Ensemble max of I / (data norms * C) per tuple, with its trend against N."""
    check_exponent(r, s, V)
    if angular_slot not in (None, 1, 2, 3):
        raise PreconditionError(f"angular slot {angular_slot} must be one of 1, 2, 3",
                                constraint="angular_slot in {1, 2, 3}")
    for bands in tuples:
        if min(bands) < N0:
            raise PreconditionError(f"tuple {bands} has a band below N0={N0}", constraint="all bands >= N0")
    rows = []
    for index, bands in enumerate(tuples):
        row = tuple_ratios(grid, tuple(bands), m, V, r, ensemble, [seed, index], samples, window,
                           N0, angular_slot)
        logger.info(f"trilinear tuple {bands}: max ratio {row.max_ratio:.4g}")
        rows.append(row)
    slope = trend_slope(rows)
    return TrilinearReport(rows, slope, tolerance,
                           {'m': m, 'r': r, 's': s, 'ensemble': ensemble, 'seed': seed,
                            'samples': samples, 'angular_slot': angular_slot, 'N0': N0})


def trend_slope(rows: Sequence[TrilinearRow]) -> float:
    """Slope of log max ratio against log N over the equal-band tuples (all tuples if none)."""
    equal = [row for row in rows if len(set(row.bands)) == 1 and row.max_ratio > 0]
    chosen = equal if len(equal) >= 2 else [row for row in rows if row.max_ratio > 0]
    if len(chosen) < 2 or len({row.bands[3] for row in chosen}) < 2:
        return float('nan')
    N = np.log([row.bands[3] for row in chosen])
    return float(linregress(N, np.log([row.max_ratio for row in chosen])).slope)
