"""Radial potentials of type (gamma1, gamma2): symbols, growth checks, dyadic pieces."""
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb, gamma as gamma_function
from scipy.stats import linregress

from lib.angular import shell_decomposition
from lib.errors import DomainError, PreconditionError
from lib.spectral import DyadicBand, Field, Grid3D, MultiplierSpec
from lib.spectral.littlewood_paley import band_symbol, is_dyadic
from utils.logger import log_execution_time, setup_logger

logger = setup_logger(__name__)

FOUR_PI = 4.0 * np.pi


class PotentialKind(str, Enum):
    YUKAWA = 'yukawa'
    COULOMB = 'coulomb'
    POWER = 'power'
    CUSTOM = 'custom'


def power_constant(gamma: float) -> float:
    """Fourier constant of |x|^-gamma in R^3."""
    return float(np.pi ** 1.5 * 2.0 ** (3.0 - gamma)
                 * gamma_function((3.0 - gamma) / 2.0) / gamma_function(gamma / 2.0))


@dataclass(frozen=True)
class PotentialSpec:
    """Radial potential descriptor.

    ``gamma1``/``gamma2`` default to the exponents of the kind: Yukawa (0, 2),
    Coulomb (2, 2), |x|^-gamma (3-gamma, 3-gamma).
    """
    kind: PotentialKind = PotentialKind.YUKAWA
    mu0: float = 1.0
    gamma1: Optional[float] = None
    gamma2: Optional[float] = None
    gamma: float = 1.0
    rule: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        kind = PotentialKind(self.kind)
        object.__setattr__(self, 'kind', kind)
        defaults = {
            PotentialKind.YUKAWA: (0.0, 2.0),
            PotentialKind.COULOMB: (2.0, 2.0),
            PotentialKind.POWER: (3.0 - self.gamma, 3.0 - self.gamma),
            PotentialKind.CUSTOM: (None, None),
        }[kind]
        if self.gamma1 is None:
            object.__setattr__(self, 'gamma1', defaults[0])
        if self.gamma2 is None:
            object.__setattr__(self, 'gamma2', defaults[1])
        if kind is PotentialKind.YUKAWA and not self.mu0 > 0:
            raise PreconditionError(f"Yukawa mass mu0={self.mu0} must be positive", constraint="mu0 > 0")
        if kind is PotentialKind.POWER and not 0.0 < self.gamma < 3.0:
            raise PreconditionError(f"power gamma={self.gamma} outside (0, 3)", constraint="0 < gamma < 3")
        if kind is PotentialKind.CUSTOM and self.rule is None:
            raise PreconditionError("custom potential needs a symbol rule", constraint="rule given")
        for label in ('gamma1', 'gamma2'):
            value = getattr(self, label)
            if value is None or not 0.0 <= value < 3.0:
                raise PreconditionError(f"{label}={value} outside [0, 3)", constraint=f"0 <= {label} < 3")

    @property
    def singular_at_zero(self) -> bool:
        return self.kind in (PotentialKind.COULOMB, PotentialKind.POWER)

    def theorem_admissible(self) -> bool:
        """Exponent window of the small-data scattering theorem."""
        return self.gamma1 < 1.0 and 1.5 < self.gamma2 < 3.0

    def radial_symbol(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        with np.errstate(divide='ignore', invalid='ignore'):
            if self.kind is PotentialKind.YUKAWA:
                return FOUR_PI / (self.mu0 ** 2 + s ** 2)
            if self.kind is PotentialKind.COULOMB:
                return FOUR_PI / s ** 2
            if self.kind is PotentialKind.POWER:
                return power_constant(self.gamma) * s ** (self.gamma - 3.0)
            return np.asarray(self.rule(s), dtype=float)

    @cached_property
    def multiplier(self) -> MultiplierSpec:
        zero_mode = None
        if self.singular_at_zero:
            zero_mode = 0.0
        elif self.kind is PotentialKind.CUSTOM and not np.isfinite(self.radial_symbol(np.zeros(1)))[0]:
            zero_mode = 0.0
        return MultiplierSpec(rule=self.radial_symbol, radial=True, name=f'V[{self.kind.value}]',
                              zero_mode=zero_mode)

    def describe(self) -> dict:
        out = {'kind': self.kind.value, 'gamma1': self.gamma1, 'gamma2': self.gamma2}
        if self.kind is PotentialKind.YUKAWA:
            out['mu0'] = self.mu0
        if self.kind is PotentialKind.POWER:
            out['gamma'] = self.gamma
        if self.singular_at_zero or self.multiplier.zero_mode is not None:
            out['zero_mode'] = 'V_hat(0) set to 0'
        return out


def symbol(spec: PotentialSpec, xi) -> np.ndarray:
    """V_hat at frequency vectors ``xi`` (last axis of length 3), zero mode per policy."""
    xi = np.asarray(xi, dtype=float)
    s = np.linalg.norm(xi, axis=-1)
    values = np.array(spec.radial_symbol(s), dtype=float)
    if spec.multiplier.zero_mode is not None:
        values = np.where(s == 0, spec.multiplier.zero_mode, values)
    bad = np.atleast_1d(~np.isfinite(values))
    if bad.any():
        point = float(np.atleast_1d(s)[bad][0])
        raise DomainError(f"potential symbol is not finite at |xi|={point}", point=point)
    return values


def kernel(spec: PotentialSpec, grid: Grid3D) -> Field:
    """Spectral field V_hat on the lattice."""
    values = spec.multiplier.evaluate(grid)
    if np.abs(values.imag).max() > 1e-12 * max(np.abs(values).max(), 1.0):
        raise PreconditionError("potential symbol must be real", constraint="V_hat real and even")
    return Field._adopt(grid, values.real.astype(np.complex128), 'spectral')


def _radial_derivative(spec: PotentialSpec, s: np.ndarray, k: int, relative_step: float) -> np.ndarray:
    """k-th central difference of the radial symbol with step h = relative_step * s."""
    if k == 0:
        return spec.radial_symbol(s)
    h = relative_step * s
    total = np.zeros_like(s)
    for j in range(k + 1):
        total += (-1) ** j * comb(k, j) * spec.radial_symbol(s + (0.5 * k - j) * h)
    return total / h ** k


@dataclass
class GrowthReport:
    k: int
    gamma1: float
    gamma2: float
    low_slope: float
    high_slope: float
    low_max_ratio: float
    high_max_ratio: float
    low_points: int
    high_points: int

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.low_max_ratio) and np.isfinite(self.high_max_ratio))

    def as_dict(self) -> dict:
        return {
            'k': self.k, 'gamma1': self.gamma1, 'gamma2': self.gamma2,
            'low_slope': self.low_slope, 'high_slope': self.high_slope,
            'low_max_ratio': self.low_max_ratio, 'high_max_ratio': self.high_max_ratio,
            'passed': self.passed,
        }


def _log_slope(s: np.ndarray, values: np.ndarray) -> float:
    magnitude = np.abs(values)
    keep = magnitude > 0
    if keep.sum() < 2:
        return float('nan')
    return float(linregress(np.log(s[keep]), np.log(magnitude[keep])).slope)


def growth_check(spec: PotentialSpec, k: int, grid: Optional[Grid3D] = None,
                 low_range: Tuple[float, float] = (1.0 / 64, 1.0),
                 high_range: Tuple[float, float] = (1.0, 64.0),
                 samples: int = 65, relative_step: float = 0.01) -> GrowthReport:
    """Measure |d^k V_hat| against |xi|^(-gamma-k) on both sides of |xi| = 1.

    Slopes are fitted on the outer factor-4 tail of each regime; the ratio
    maximum runs over the whole regime. With a grid, only lattice radii are used.
    """
    if not 0 <= k <= 4:
        raise PreconditionError(f"derivative order k={k} outside 0..4", constraint="0 <= k <= 4")
    lo_a, lo_b = low_range
    hi_a, hi_b = high_range
    if grid is None:
        low = np.geomspace(lo_a, lo_b, samples)
        high = np.geomspace(hi_a, hi_b, samples)[1:]
    else:
        radii = np.unique(grid.fundamental * np.sqrt(np.unique(grid.k_squared)))
        low = radii[(radii >= lo_a) & (radii <= lo_b)]
        high = radii[(radii > hi_a) & (radii <= hi_b)]
        if len(low) < 4 or len(high) < 4:
            raise PreconditionError(
                f"insufficient lattice range: {len(low)} low and {len(high)} high radii",
                constraint="at least 4 lattice radii per regime")
    low_values = _radial_derivative(spec, low, k, relative_step)
    high_values = _radial_derivative(spec, high, k, relative_step)
    low_tail = low <= lo_a * 4.0
    high_tail = high >= hi_b / 4.0
    if low_tail.sum() < 2:
        low_tail = np.arange(len(low)) < max(2, len(low) // 4)
    if high_tail.sum() < 2:
        high_tail = np.arange(len(high)) >= len(high) - max(2, len(high) // 4)
    low_ratio = np.abs(low_values) * low ** (spec.gamma1 + k)
    high_ratio = np.abs(high_values) * high ** (spec.gamma2 + k)
    return GrowthReport(
        k=k, gamma1=spec.gamma1, gamma2=spec.gamma2,
        low_slope=_log_slope(low[low_tail], low_values[low_tail]),
        high_slope=_log_slope(high[high_tail], high_values[high_tail]),
        low_max_ratio=float(np.max(low_ratio)), high_max_ratio=float(np.max(high_ratio)),
        low_points=len(low), high_points=len(high),
    )


def _band_piece(grid: Grid3D, M: float, spectrum: Optional[np.ndarray]) -> Field:
    chi_values = band_symbol(grid, DyadicBand.homogeneous(M))
    values = chi_values if spectrum is None else chi_values * spectrum
    return Field._adopt(grid, np.asarray(values, dtype=np.complex128), 'spectral').physical()


def _require_resolved(grid: Grid3D, M: float) -> None:
    if not is_dyadic(M):
        raise PreconditionError(f"M={M} is not dyadic", constraint="M dyadic")
    if M > 0.5 * grid.xi_max:
        raise PreconditionError(f"band M={M} lies above half the Nyquist frequency {0.5 * grid.xi_max:.4g}",
                                constraint="M <= xi_max / 2")


def dyadic_piece(spec: PotentialSpec, M: float, grid: Grid3D) -> Field:
    """V_M = F^-1(chi_M V_hat) in physical representation."""
    _require_resolved(grid, M)
    return _band_piece(grid, M, kernel(spec, grid).values)


def kernel_piece(M: float, grid: Grid3D) -> Field:
    """F^-1 chi_M."""
    _require_resolved(grid, M)
    return _band_piece(grid, M, None)


def shell_lp_norm(f: Field, p: float) -> float:
    """L^p norm by shell quadrature, sum_j 4 pi r_j^2 dr <|f|^p>_shell."""
    shells = shell_decomposition(f.grid)
    means = shells.shell_mean(np.abs(f.physical().values) ** p)
    return float((4.0 * np.pi * np.sum(shells.weights * means)) ** (1.0 / p))


def outside_mass_fraction(f: Field, radius: float) -> float:
    magnitude = np.abs(f.physical().values)
    total = magnitude.sum()
    if total == 0:
        return 0.0
    return float(magnitude[f.grid.radius > radius].sum() / total)


def adapted_grid(M: float, n: int) -> Grid3D:
    """Grid whose Nyquist frequency sits a factor 4 above the band scale."""
    return Grid3D(n, np.pi * n / (4.0 * M))


@dataclass
class ScalingFit:
    p: float
    scales: List[float]
    piece_norms: List[float]
    kernel_norms: List[float]
    slope: float
    intercept: float
    stderr: float
    kernel_slope: float
    kernel_intercept: float
    expected_slope: float
    expected_kernel_slope: float
    excluded: List[float] = field(default_factory=list)

    def rows(self) -> List[dict]:
        return [
            {'M': M, 'log_M': float(np.log(M)), 'piece_norm': a, 'log_piece_norm': float(np.log(a)),
             'kernel_norm': b, 'log_kernel_norm': float(np.log(b))}
            for M, a, b in zip(self.scales, self.piece_norms, self.kernel_norms)
        ]


@log_execution_time(logger)
def piece_scaling_fit(spec: PotentialSpec, p: float, scales: Sequence[float],
                      n: int = 96, grid: Optional[Grid3D] = None) -> ScalingFit:
    """Log-log slope of ||V_M||_{L^p} and of ||F^-1 chi_M||_{L^p} against M."""
    if not 1.0 < p < np.inf:
        raise PreconditionError(f"Lebesgue exponent p={p} outside (1, inf)", constraint="1 < p < inf")
    scales = sorted(float(M) for M in scales)
    excluded = []
    if grid is not None:
        excluded = [M for M in scales if M > grid.xi_max / 4.0]
        if excluded:
            logger.warning(f"excluding bands {excluded} within a factor 4 of Nyquist {grid.xi_max:.4g}")
        scales = [M for M in scales if M not in excluded]
    if len(scales) < 4:
        raise PreconditionError(f"scaling fit needs at least 4 dyadic bands, got {len(scales)}",
                                constraint="at least 4 bands")
    piece_norms, kernel_norms = [], []
    for M in scales:
        band_grid = grid if grid is not None else adapted_grid(M, n)
        piece_norms.append(dyadic_piece(spec, M, band_grid).lp_norm(p))
        kernel_norms.append(kernel_piece(M, band_grid).lp_norm(p))
    log_m = np.log(scales)
    fit = linregress(log_m, np.log(piece_norms))
    kernel_fit = linregress(log_m, np.log(kernel_norms))
    gamma_used = spec.gamma1 if max(scales) <= 1.0 else spec.gamma2
    logger.info(f"{spec.kind.value} p={p}: piece slope {fit.slope:.4f}, kernel slope {kernel_fit.slope:.4f}")
    return ScalingFit(
        p=p, scales=scales, piece_norms=piece_norms, kernel_norms=kernel_norms,
        slope=float(fit.slope), intercept=float(fit.intercept), stderr=float(fit.stderr),
        kernel_slope=float(kernel_fit.slope), kernel_intercept=float(kernel_fit.intercept),
        expected_slope=3.0 - 3.0 / p - gamma_used, expected_kernel_slope=3.0 - 3.0 / p,
        excluded=excluded,
    )
