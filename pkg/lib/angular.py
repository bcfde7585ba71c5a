"""Spherical gradient, H^s / H^{s,1} norms and shell-averaged mixed norms."""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from lib.errors import PreconditionError
from lib.spectral import Field, Grid3D, bessel_multiplier, convolve, gradient
from lib.spectral.multipliers import radial_levels
from utils.logger import setup_logger

logger = setup_logger(__name__)

MIN_SHELL_MEMBERS = 6
MIN_SPHERE_MEMBERS = 50
BOUNDARY_DECAY_LIMIT = 1e-8


@dataclass(frozen=True)
class ShellDecomposition:
    """Nearest-shell binning of the lattice points inside the ball |x| < L/2.

    Shell ``j`` collects the points with ``j*dr <= |x| < (j+1)*dr`` and carries
    the radius ``(j+1/2)*dr`` and the radial weight ``r_j^2 dr``.
    """
    grid: Grid3D
    index: np.ndarray
    inside: np.ndarray
    counts: np.ndarray
    radii: np.ndarray
    weights: np.ndarray

    @property
    def dr(self) -> float:
        return self.grid.dx

    @property
    def n_shells(self) -> int:
        return len(self.radii)

    def shell_mean(self, values: np.ndarray) -> np.ndarray:
        """Equal-weight mean over each shell; empty shells give 0."""
        sums = np.bincount(self.index[self.inside], weights=values[self.inside],
                           minlength=self.n_shells)
        with np.errstate(invalid='ignore', divide='ignore'):
            means = np.where(self.counts > 0, sums / np.maximum(self.counts, 1), 0.0)
        return means

    def shell_max(self, values: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n_shells)
        np.maximum.at(out, self.index[self.inside], values[self.inside])
        return out

    def ball_volume_estimate(self) -> float:
        return float(4.0 * np.pi * self.weights.sum())

    def radialize(self, values: np.ndarray) -> np.ndarray:
        """Replace each point by its shell mean; points outside the ball become 0."""
        means = self.shell_mean(np.real(values)) + 1j * self.shell_mean(np.imag(values))
        out = np.zeros(self.grid.shape, dtype=np.complex128)
        out[self.inside] = means[self.index[self.inside]]
        return out


@lru_cache(maxsize=16)
def shell_decomposition(grid: Grid3D) -> ShellDecomposition:
    dr = grid.dx
    radius = grid.radius
    inside = radius < 0.5 * grid.L
    index = np.floor(radius / dr).astype(np.int64)
    n_shells = int(index[inside].max()) + 1
    counts = np.bincount(index[inside], minlength=n_shells)
    radii = (np.arange(n_shells) + 0.5) * dr
    weights = radii ** 2 * dr
    for array in (index, inside, counts, radii, weights):
        array.flags.writeable = False
    return ShellDecomposition(grid, index, inside, counts, radii, weights)


def spherical_gradient(f: Field) -> Tuple[Field, Field, Field]:
    """(x x grad f): spectral gradient, pointwise cross product on centered coordinates."""
    decay = f.boundary_decay()
    if decay > BOUNDARY_DECAY_LIMIT:
        logger.warning(f"field does not decay at the box boundary (relative level {decay:.2e}); "
                       "x cross grad picks up the periodic seam")
    d1, d2, d3 = (component.physical().values for component in gradient(f))
    x1, x2, x3 = f.grid.coords
    grid = f.grid
    return (
        Field._adopt(grid, x2 * d3 - x3 * d2, 'physical'),
        Field._adopt(grid, x3 * d1 - x1 * d3, 'physical'),
        Field._adopt(grid, x1 * d2 - x2 * d1, 'physical'),
    )


def _require_regularity(s: float) -> None:
    if not 0.0 <= s <= 4.0:
        raise PreconditionError(f"regularity s={s} outside [0, 4]", constraint="0 <= s <= 4")


def hs_norm(f: Field, s: float) -> float:
    _require_regularity(s)
    spectrum = f.spectral().values
    weight = np.abs(bessel_multiplier(float(s)).evaluate(f.grid)) ** 2
    return float(np.sqrt(np.sum(weight * np.abs(spectrum) ** 2) / f.grid.volume))


def vector_hs_norm(components: Sequence[Field], s: float) -> float:
    return float(np.sqrt(sum(hs_norm(c, s) ** 2 for c in components)))


def hs1_norm(f: Field, s: float) -> float:
    """||f||_{H^s} + ||grad_S f||_{H^s}."""
    return hs_norm(f, s) + vector_hs_norm(spherical_gradient(f), s)


def is_radial(f: Field, tolerance: float = 1e-10) -> bool:
    """Spectrum constant on every lattice orbit of |k|^2, relative to its peak."""
    spectrum = f.spectral().values
    peak = np.abs(spectrum).max()
    if peak == 0:
        return True
    _, inverse = radial_levels(f.grid)
    levels = inverse.ravel()
    values = spectrum.ravel()
    size = int(levels.max()) + 1
    spread = 0.0
    for part in (values.real, values.imag):
        upper = np.full(size, -np.inf)
        lower = np.full(size, np.inf)
        np.maximum.at(upper, levels, part)
        np.minimum.at(lower, levels, part)
        spread = max(spread, float(np.max(upper - lower)))
    return spread <= tolerance * peak


def shell_mixed_norm(f: Field, r: float, r_star: float,
                     shells: Optional[ShellDecomposition] = None) -> Tuple[float, np.ndarray]:
    """L^r(r^2 dr) over shells of the L^{r*} surface norm; returns the value and per-shell terms."""
    shells = shells or shell_decomposition(f.grid)
    magnitude = np.abs(f.physical().values)
    if np.isinf(r_star):
        angular = shells.shell_max(magnitude)
    else:
        angular = (4.0 * np.pi * shells.shell_mean(magnitude ** r_star)) ** (1.0 / r_star)
    if np.isinf(r):
        return float(angular.max()), angular
    terms = shells.weights * angular ** r
    return float(terms.sum() ** (1.0 / r)), terms


@dataclass
class MixedNormReport:
    q: float
    r: float
    r_star: float
    value: float
    coverage: float
    warnings: List[str] = field(default_factory=list)

    def row(self) -> dict:
        return {'q': self.q, 'r': self.r, 'r_star': self.r_star,
                'value': self.value, 'shell_coverage': self.coverage}


def _time_norm(values: np.ndarray, times: np.ndarray, q: float) -> float:
    if np.isinf(q):
        return float(values.max())
    if len(times) < 2:
        raise PreconditionError("a finite time exponent needs at least two samples",
                                constraint="len(times) >= 2")
    return float(trapezoid(values ** q, times) ** (1.0 / q))


def mixed_norm_report(samples: Sequence[Field], times: Sequence[float],
                      q: float, r: float, r_star: float) -> MixedNormReport:
    if r_star > r:
        raise PreconditionError(f"angular exponent r*={r_star} exceeds r={r}", constraint="r* <= r")
    times = np.asarray(times, dtype=float)
    if len(times) != len(samples):
        raise PreconditionError("one time per sample is required", constraint="len(times) == len(samples)")
    if len(times) > 2:
        steps = np.diff(times)
        if np.abs(steps - steps[0]).max() > 1e-9 * max(abs(steps[0]), 1.0):
            raise PreconditionError("mixed norms need a uniform time grid", constraint="uniform times")
    shells = shell_decomposition(samples[0].grid)
    sparse = shells.counts < MIN_SHELL_MEMBERS
    per_time = np.empty(len(samples))
    sparse_share = 0.0
    for j, sample in enumerate(samples):
        value, terms = shell_mixed_norm(sample, r, r_star, shells)
        per_time[j] = value
        total = terms.sum()
        if total > 0 and not np.isinf(r):
            sparse_share = max(sparse_share, float(terms[sparse].sum() / total))
    warnings = []
    if sparse_share > 0.1:
        message = (f"shells with fewer than {MIN_SHELL_MEMBERS} points carry "
                   f"{sparse_share:.1%} of the mixed norm")
        logger.warning(message)
        warnings.append(message)
    return MixedNormReport(q, r, r_star, _time_norm(per_time, times, q), 1.0 - sparse_share, warnings)


def mixed_norm(samples: Sequence[Field], times: Sequence[float],
               q: float, r: float, r_star: float) -> float:
    return mixed_norm_report(samples, times, q, r, r_star).value


def sphere_sobolev_ratio(f: Field, r_tilde: float, sup_variant: bool = False) -> float:
    """Largest per-shell ratio of the sphere Sobolev inequality (normalized measure).

    With ``sup_variant`` the left side is the shell maximum and the right side uses
    L^{r_tilde} averages of f and grad_S f.
    """
    if not 2.0 < r_tilde < np.inf:
        raise PreconditionError(f"r_tilde={r_tilde} must lie in (2, inf)", constraint="2 < r_tilde < inf")
    shells = shell_decomposition(f.grid)
    magnitude = np.abs(f.physical().values)
    angular = np.sqrt(sum(np.abs(c.values) ** 2 for c in spherical_gradient(f)))
    if sup_variant:
        lhs = shells.shell_max(magnitude)
        rhs = (shells.shell_mean(magnitude ** r_tilde) ** (1.0 / r_tilde)
               + shells.shell_mean(angular ** r_tilde) ** (1.0 / r_tilde))
    else:
        lhs = shells.shell_mean(magnitude ** r_tilde) ** (1.0 / r_tilde)
        rhs = np.sqrt(shells.shell_mean(magnitude ** 2)) + np.sqrt(shells.shell_mean(angular ** 2))
    qualifying = (shells.counts >= MIN_SPHERE_MEMBERS) & (rhs > 0)
    if not qualifying.any():
        raise PreconditionError(f"no shell has {MIN_SPHERE_MEMBERS} or more members with nonzero data",
                                constraint=f"shell members >= {MIN_SPHERE_MEMBERS}")
    return float(np.max(lhs[qualifying] / rhs[qualifying]))


def radial_convolution_commutator(psi: Field, f: Field) -> float:
    """max |grad_S(psi*f) - psi*grad_S f| over the three components."""
    if not is_radial(psi):
        raise PreconditionError("convolution kernel is not radial", constraint="psi radial")
    return commutator_defect(psi, f)


def commutator_defect(psi: Field, f: Field) -> float:
    outer = spherical_gradient(convolve(psi, f))
    inner = spherical_gradient(f)
    return float(max(
        np.abs(a.physical().values - convolve(psi, b).physical().values).max()
        for a, b in zip(outer, inner)
    ))


@dataclass(frozen=True)
class YoungCheck:
    lhs: float
    rhs: float
    tolerance: float

    @property
    def holds(self) -> bool:
        return self.lhs <= (1.0 + self.tolerance) * self.rhs


def young_mixed_check(psi: Field, f: Field, p: float, q: float, p1: float, q1: float,
                      p2: float, tolerance: float = 0.05) -> YoungCheck:
    """Compare ||psi*f|| in L^p(r^2 dr) L^q_theta with ||psi||_{L^p2} ||f|| in L^p1 L^q1."""
    if abs(1.0 / p1 + 1.0 / p2 - 1.0 - 1.0 / p) > 1e-12:
        raise PreconditionError("exponents violate 1/p1 + 1/p2 - 1 = 1/p",
                                constraint="1/p1 + 1/p2 - 1 = 1/p")
    if 1.0 / q1 + 1.0 / p2 - 1.0 > 1.0 / q + 1e-12:
        raise PreconditionError("exponents violate 1/q1 + 1/p2 - 1 <= 1/q",
                                constraint="1/q1 + 1/p2 - 1 <= 1/q")
    lhs, _ = shell_mixed_norm(convolve(psi, f), p, q)
    f_norm, _ = shell_mixed_norm(f, p1, q1)
    return YoungCheck(lhs, psi.lp_norm(p2) * f_norm, tolerance)
