"""Computable lower-bound-flavored stand-in for the X^s norm of a sampled solution."""
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from lib.angular import spherical_gradient
from lib.errors import PreconditionError
from lib.propagators.free_flow import free_evolve
from lib.scattering.variation import VariationSamples, vp_norm_discrete
from lib.spectral import DEFAULT_N0, Field, project, resolved_bands

SURROGATE_LABEL = 'X^s-surrogate'
MIN_SAMPLES = 17


@dataclass
class SurrogateReport:
    value: float
    bands: List[float] = field(default_factory=list)
    sup_terms: List[float] = field(default_factory=list)
    variation_terms: List[float] = field(default_factory=list)
    label: str = SURROGATE_LABEL

    def rows(self) -> List[dict]:
        return [{'band': N, 'sup_term': a, 'variation_term': b}
                for N, a, b in zip(self.bands, self.sup_terms, self.variation_terms)]


def _band_term(samples: Sequence, times: Sequence[float], m: float) -> tuple:
    """sup_t ||v(t)|| and the V^2 variation of t -> exp(it Lambda) v(t)."""
    if isinstance(samples[0], Field):
        sup = max(v.l2_norm() for v in samples)
        pulled = [free_evolve(v, -t, m) for v, t in zip(samples, times)]
    else:
        sup = max(float(np.sqrt(sum(c.l2_norm() ** 2 for c in v))) for v in samples)
        pulled = [tuple(free_evolve(c, -t, m) for c in v) for v, t in zip(samples, times)]
    return sup, vp_norm_discrete(VariationSamples(times, pulled), 2.0)


def xs_surrogate(times: Sequence[float], snapshots: Sequence[Field], m: float, s: float,
                 N0: float = DEFAULT_N0) -> SurrogateReport:
    """(sum_N N^{2s} (S(P_N u) + S(grad_S P_N u))^2)^{1/2}, S = sup-norm + V^2 variation."""
    if len(snapshots) < MIN_SAMPLES:
        raise PreconditionError(f"surrogate norm needs at least {MIN_SAMPLES} samples, got {len(snapshots)}",
                                constraint=f"samples >= {MIN_SAMPLES}")
    report = SurrogateReport(value=0.0)
    total = 0.0
    for band in resolved_bands(snapshots[0].grid, N0):
        pieces = [project(u, band) for u in snapshots]
        sup_u, var_u = _band_term(pieces, times, m)
        angular = [spherical_gradient(piece) for piece in pieces]
        sup_a, var_a = _band_term(angular, times, m)
        term = sup_u + var_u + sup_a + var_a
        total += band.scale ** (2.0 * s) * term ** 2
        report.bands.append(band.scale)
        report.sup_terms.append(sup_u + sup_a)
        report.variation_terms.append(var_u + var_a)
    report.value = float(np.sqrt(total))
    return report


def xs_surrogate_norm(trajectory, m: float, s: float, N0: float = DEFAULT_N0) -> float:
    return xs_surrogate(trajectory.times, trajectory.snapshots, m, s, N0).value
