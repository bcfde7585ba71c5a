"""Empirical Strichartz exponent probes on free solutions.

Each probe evolves random band-localized unit data over the window
[0, L/4], measures a space-time norm and fits its growth against the band
scale. Free solutions stand in for U^2 atoms; reports say so.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.stats import linregress

from lib.angular import mixed_norm, shell_decomposition
from lib.ensemble import run_ensemble
from lib.errors import PreconditionError
from lib.propagators.free_flow import DispersionRelation, bracket, free_samples
from lib.spectral import DEFAULT_N0, DyadicBand, Field, Grid3D, project
from utils.logger import log_execution_time, setup_logger

logger = setup_logger(__name__)

FREE_SOLUTION_NOTE = ("probes evaluate free solutions exp(-it Lambda_m) P phi; "
                      "U^2 atoms are not computed")
WRAP_TOLERANCE = 1e-6


def window_times(grid: Grid3D, samples: int = 256, window: Optional[float] = None) -> np.ndarray:
    window = 0.25 * grid.L if window is None else window
    return np.linspace(0.0, window, samples)


def band_data(grid: Grid3D, band: DyadicBand, rng: np.random.Generator,
              radial: bool = False, width: Optional[float] = None) -> Field:
    """Complex noise under a Gaussian envelope, projected onto ``band`` and L^2-normalized."""
    width = grid.L / 20.0 if width is None else width
    noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    values = noise * np.exp(-grid.radius ** 2 / (2.0 * width ** 2))
    if radial:
        values = shell_decomposition(grid).radialize(values)
    data = project(Field(grid, values), band)
    norm = data.l2_norm()
    if norm == 0:
        return data
    return data / norm


def _check_wrap(final: Field, tolerance: float) -> None:
    fraction = final.boundary_fraction()
    if fraction > tolerance:
        raise PreconditionError(
            f"window too short: boundary wrap detected ({fraction:.2e} of the mass at the faces "
            "before the window ends)", constraint="boundary mass <= wrap tolerance")


def space_time_norm(phi: Field, times: np.ndarray, m: float, q: float,
                    space_norm: Callable[[Field], float],
                    wrap_tolerance: float = WRAP_TOLERANCE) -> float:
    samples = free_samples(phi, times, m)
    _check_wrap(samples[-1], wrap_tolerance)
    values = np.array([space_norm(u) for u in samples])
    if np.isinf(q):
        return float(values.max())
    return float(trapezoid(values ** q, times) ** (1.0 / q))


@dataclass
class SlopeReport:
    probe: str
    scales: List[float]
    ratio_max: List[float]
    ratio_mean: List[float]
    ratio_cv: List[float]
    slope: float
    intercept: float
    stderr: float
    threshold: float
    parameters: dict = field(default_factory=dict)
    notes: List[str] = field(default_factory=lambda: [FREE_SOLUTION_NOTE])

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.slope) and self.slope <= self.threshold)

    @property
    def ci(self) -> float:
        return 1.96 * self.stderr

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            'band': self.scales, 'ratio': self.ratio_max, 'ratio_mean': self.ratio_mean,
            'ratio_cv': self.ratio_cv, 'fitted_slope': self.slope, 'ci': self.ci,
        })

    def summary(self) -> dict:
        return {
            'probe': self.probe, 'slope': self.slope, 'intercept': self.intercept,
            'ci': self.ci, 'threshold': self.threshold, 'passed': self.passed,
            'parameters': self.parameters, 'notes': self.notes,
        }


def _ratio_statistics(ratios: Sequence[float]):
    ratios = np.asarray(ratios, dtype=float)
    mean = float(ratios.mean())
    cv = float(ratios.std() / mean) if mean > 0 else 0.0
    return float(ratios.max()), mean, cv


def _fit(abscissa: Sequence[float], ratios: Sequence[float]):
    fit = linregress(np.log(abscissa), np.log(ratios))
    return float(fit.slope), float(fit.intercept), float(fit.stderr)


def _band_ratios(grid, band, m, q, space_norm, ensemble, seed, samples, window,
                 wrap_tolerance, radial=False) -> List[float]:
    times = window_times(grid, samples, window)

    def trial(rng, index):
        phi = band_data(grid, band, rng, radial=radial)
        norm = phi.l2_norm()
        if norm == 0:
            raise PreconditionError(f"band {band.label()} carries no lattice frequencies",
                                    constraint="band resolved on the grid")
        return space_time_norm(phi, times, m, q, space_norm, wrap_tolerance) / norm

    return run_ensemble(trial, ensemble, seed)


def _require_bands(scales: Sequence[float]) -> None:
    if len(scales) < 2:
        raise PreconditionError("a slope fit needs at least two bands", constraint="len(scales) >= 2")


@log_execution_time(logger)
def besov_strichartz_probe(grid: Grid3D, m: float, scales: Sequence[float], q: float, r: float,
                           ensemble: int = 20, seed: int = 0, samples: int = 256,
                           window: Optional[float] = None, tolerance: float = 0.1,
                           wrap_tolerance: float = WRAP_TOLERANCE) -> SlopeReport:
    """Growth of ||exp(-it Lambda) P_M phi||_{L^q_t L^r_x} / ||P_M phi|| against <M>."""
    DispersionRelation(m)
    if abs(2.0 / q + 3.0 / r - 1.5) > 1e-12:
        raise PreconditionError(f"(q, r)=({q}, {r}) is not admissible", constraint="2/q + 3/r = 3/2")
    _require_bands(scales)
    stats = []
    for index, M in enumerate(scales):
        ratios = _band_ratios(grid, DyadicBand.homogeneous(M), m, q, lambda u: u.lp_norm(r),
                              ensemble, [seed, index], samples, window, wrap_tolerance)
        stats.append(_ratio_statistics(ratios))
        logger.info(f"besov probe M={M}: max ratio {stats[-1][0]:.4g}, cv {stats[-1][2]:.3f}")
    maxima = [s[0] for s in stats]
    slope, intercept, stderr = _fit([bracket(M) for M in scales], maxima)
    return SlopeReport(
        probe='besov', scales=list(scales), ratio_max=maxima,
        ratio_mean=[s[1] for s in stats], ratio_cv=[s[2] for s in stats],
        slope=slope, intercept=intercept, stderr=stderr, threshold=5.0 / (3.0 * q) + tolerance,
        parameters={'m': m, 'q': q, 'r': r, 'ensemble': ensemble, 'seed': seed, 'samples': samples},
    )


def angular_threshold(r: float) -> float:
    return 1.0 / r if r < 4.0 else 1.0 - 3.0 / r


@log_execution_time(logger)
def angular_strichartz_probe(grid: Grid3D, m: float, scales: Sequence[float], r: float,
                             ensemble: int = 20, seed: int = 0, samples: int = 256,
                             window: Optional[float] = None, tolerance: float = 0.1,
                             N0: float = DEFAULT_N0, radial: bool = False,
                             wrap_tolerance: float = WRAP_TOLERANCE) -> SlopeReport:
    """Growth of the L^2_t L^r(r^2 dr) L^2_theta norm of free band-N solutions against N."""
    DispersionRelation(m)
    if not 10.0 / 3.0 < r < 6.0 or r == 4.0:
        raise PreconditionError(f"r={r} outside (10/3, 6) minus {{4}}", constraint="10/3 < r < 6, r != 4")
    _require_bands(scales)
    times = window_times(grid, samples, window)
    stats = []
    for index, N in enumerate(scales):
        band = DyadicBand.inhomogeneous(N, N0)

        def trial(rng, trial_index, band=band):
            phi = band_data(grid, band, rng, radial=radial)
            norm = phi.l2_norm()
            if norm == 0:
                raise PreconditionError(f"band {band.label()} carries no lattice frequencies",
                                        constraint="band resolved on the grid")
            evolved = free_samples(phi, times, m)
            _check_wrap(evolved[-1], wrap_tolerance)
            return mixed_norm(evolved, times, 2.0, r, 2.0) / norm

        stats.append(_ratio_statistics(run_ensemble(trial, ensemble, [seed, index])))
        logger.info(f"angular probe N={N}: max ratio {stats[-1][0]:.4g}")
    maxima = [s[0] for s in stats]
    slope, intercept, stderr = _fit(scales, maxima)
    return SlopeReport(
        probe='angular-radial' if radial else 'angular', scales=list(scales), ratio_max=maxima,
        ratio_mean=[s[1] for s in stats], ratio_cv=[s[2] for s in stats],
        slope=slope, intercept=intercept, stderr=stderr, threshold=angular_threshold(r) + tolerance,
        parameters={'m': m, 'r': r, 'ensemble': ensemble, 'seed': seed, 'samples': samples,
                    'N0': N0, 'radial': radial},
    )


@dataclass
class LowBandReport:
    N0: float
    constants: List[float]
    parameters: dict = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return not self.constants

    @property
    def mean(self) -> float:
        return float(np.mean(self.constants)) if self.constants else float('nan')

    @property
    def cv(self) -> float:
        if not self.constants or self.mean == 0:
            return float('nan')
        return float(np.std(self.constants) / self.mean)

    @property
    def passed(self) -> bool:
        return bool(np.all(np.isfinite(self.constants)))

    def summary(self) -> dict:
        return {'N0': self.N0, 'trials': len(self.constants), 'mean': self.mean, 'cv': self.cv,
                'max': max(self.constants) if self.constants else None, 'passed': self.passed}


def low_band_constant(phi: Field, m: float, N0: float, times: np.ndarray,
                      wrap_tolerance: float = WRAP_TOLERANCE) -> Optional[float]:
    """||exp(-it Lambda) P_N0 phi||_{L^2_t L^6_x} / ||P_N0 phi||, or None for zero data."""
    data = project(phi, DyadicBand.inhomogeneous(N0, N0))
    norm = data.l2_norm()
    if norm == 0:
        return None
    return space_time_norm(data, times, m, 2.0, lambda u: u.lp_norm(6.0), wrap_tolerance) / norm


@log_execution_time(logger)
def low_band_strichartz_check(grid: Grid3D, m: float, N0: float = DEFAULT_N0, ensemble: int = 20,
                              seed: int = 0, samples: int = 256, window: Optional[float] = None,
                              amplitude: float = 1.0,
                              wrap_tolerance: float = WRAP_TOLERANCE) -> LowBandReport:
    DispersionRelation(m)
    times = window_times(grid, samples, window)
    band = DyadicBand.inhomogeneous(N0, N0)

    def trial(rng, index):
        phi = band_data(grid, band, rng) * amplitude
        return low_band_constant(phi, m, N0, times, wrap_tolerance)

    constants = [c for c in run_ensemble(trial, ensemble, seed) if c is not None]
    return LowBandReport(N0, constants, {'m': m, 'ensemble': ensemble, 'seed': seed, 'samples': samples})
