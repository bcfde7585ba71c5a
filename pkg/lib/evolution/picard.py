"""Duhamel-Picard iteration u -> exp(-it Lambda) phi + N_m(u, u, u) on a sample grid."""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from lib.angular import hs1_norm
from lib.ensemble import parallel_map
from lib.errors import PreconditionError
from lib.evolution.hartree import trilinear_force
from lib.potentials import PotentialSpec
from lib.propagators.free_flow import dispersion_on_grid
from lib.spectral import Field, Grid3D
from lib.spectral.field import Representation
from utils.logger import log_execution_time, setup_logger

logger = setup_logger(__name__)

MIN_SAMPLES = 17
ROUNDOFF_FLOOR = 1e-13


def sample_times(horizon: float, samples: int) -> np.ndarray:
    if samples < MIN_SAMPLES:
        raise PreconditionError(f"Picard iteration needs at least {MIN_SAMPLES} time samples, got {samples}",
                                constraint=f"J >= {MIN_SAMPLES}")
    return np.linspace(0.0, horizon, samples)


def footprint_bytes(grid: Grid3D, samples: int) -> int:
    """Two iterates of J complex fields plus the Duhamel integrand."""
    return 3 * samples * grid.n ** 3 * 16


def _phases(grid: Grid3D, m: float, times: np.ndarray, sign: float) -> List[np.ndarray]:
    omega = dispersion_on_grid(grid, m)
    return [np.exp(sign * 1j * t * omega) for t in times]


def free_iterate(phi: Field, times: np.ndarray, m: float) -> List[Field]:
    spectrum = phi.spectral().values
    return [Field._adopt(phi.grid, phase * spectrum, Representation.SPECTRAL).physical()
            for phase in _phases(phi.grid, m, times, -1.0)]


def duhamel_term(u1: Sequence[Field], u2: Sequence[Field], u3: Sequence[Field], times: np.ndarray,
                 m: float, V: PotentialSpec) -> List[Field]:
    """N_m(u1, u2, u3)(t_j) = -i int_0^t_j exp(-i(t_j - t') Lambda) [V * (u1 conj u2)] u3 dt'.

    The integrand is pulled back to the interaction picture and integrated with the
    composite trapezoid rule on the sample grid.
    """
    grid = u1[0].grid
    forward = _phases(grid, m, times, +1.0)

    def pulled_back(j):
        force = trilinear_force(u1[j], u2[j], u3[j], V).spectral().values
        return forward[j] * force

    integrand = np.stack(parallel_map(pulled_back, list(range(len(times)))))
    integral = cumulative_trapezoid(integrand, times, axis=0, initial=0)
    backward = _phases(grid, m, times, -1.0)
    return [Field._adopt(grid, -1j * backward[j] * integral[j], Representation.SPECTRAL).physical()
            for j in range(len(times))]


def picard_map(phi: Field, u: Sequence[Field], times: np.ndarray, m: float, V: PotentialSpec) -> List[Field]:
    free = free_iterate(phi, times, m)
    nonlinear = duhamel_term(u, u, u, times, m, V)
    return [a + b for a, b in zip(free, nonlinear)]


def sup_norm(samples: Sequence[Field], s: float) -> float:
    return max(hs1_norm(u, s) for u in samples)


def sup_difference(a: Sequence[Field], b: Sequence[Field], s: float) -> float:
    return max(hs1_norm(x - y, s) for x, y in zip(a, b))


@dataclass
class PicardReport:
    times: np.ndarray
    increments: List[float] = field(default_factory=list)
    ratios: List[float] = field(default_factory=list)
    iterate: List[Field] = field(default_factory=list)
    converged: bool = False
    non_contraction: bool = False
    footprint: int = 0

    @property
    def iterations(self) -> int:
        return len(self.increments)

    def contraction_from(self, start: int, bound: float = 0.5) -> bool:
        """All ratios from iteration ``start`` on stay below ``bound``."""
        tail = self.ratios[start - 1:] if start >= 1 else self.ratios
        return bool(tail) and all(r < bound for r in tail)

    def rows(self) -> List[dict]:
        rows = []
        for k, increment in enumerate(self.increments):
            rows.append({'iteration': k, 'increment': increment,
                         'ratio': self.ratios[k - 1] if k >= 1 else float('nan')})
        return rows

    def summary(self) -> dict:
        return {'iterations': self.iterations, 'converged': self.converged,
                'non_contraction': self.non_contraction, 'increments': self.increments,
                'ratios': self.ratios, 'footprint_bytes': self.footprint}


@log_execution_time(logger)
def duhamel_picard(phi: Field, m: float, V: PotentialSpec, horizon: float, max_iters: int = 8,
                   samples: int = 33, s: float = 0.3) -> PicardReport:
    """Iterate the Duhamel map from the free solution and track sup_t H^{s,1} increments.

    Iteration stops once an increment falls under the round-off floor relative to
    the iterate; two consecutive ratios >= 1 raise the non-contraction flag.
    """
    times = sample_times(horizon, samples)
    report = PicardReport(times=times, footprint=footprint_bytes(phi.grid, samples))
    current = free_iterate(phi, times, m)
    scale = sup_norm(current, s)
    report.iterate = current
    if scale == 0:
        report.increments.append(0.0)
        report.converged = True
        return report
    for k in range(max_iters):
        following = picard_map(phi, current, times, m, V)
        increment = sup_difference(following, current, s)
        report.increments.append(increment)
        if len(report.increments) >= 2 and report.increments[-2] > 0:
            report.ratios.append(increment / report.increments[-2])
        current = following
        report.iterate = current
        logger.info(f"Picard iteration {k + 1}: increment {increment:.3e}")
        if len(report.ratios) >= 2 and report.ratios[-1] >= 1.0 and report.ratios[-2] >= 1.0:
            report.non_contraction = True
            logger.warning("Picard map is not contracting: two consecutive ratios >= 1")
            break
        if increment < ROUNDOFF_FLOOR * sup_norm(current, s):
            report.converged = True
            break
    return report


def difference_probe(u: Sequence[Field], v: Sequence[Field], times: np.ndarray, m: float,
                     V: PotentialSpec, s: float = 0.3) -> Optional[float]:
    """||N(u) - N(v)|| / ((||u|| + ||v||)^2 ||u - v||) with sup_t H^{s,1} norms."""
    gap = sup_difference(u, v, s)
    if gap == 0:
        return None
    nu = duhamel_term(u, u, u, times, m, V)
    nv = duhamel_term(v, v, v, times, m, V)
    return sup_difference(nu, nv, s) / ((sup_norm(u, s) + sup_norm(v, s)) ** 2 * gap)
