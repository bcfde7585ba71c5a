"""Discrete p-variation over sampled partitions, maximized by dynamic programming."""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from lib.errors import PreconditionError
from lib.spectral import Field
from utils.logger import setup_logger

logger = setup_logger(__name__)

MAX_EXACT_SAMPLES = 64

Sample = Union[Field, np.ndarray, Sequence[Field]]


def default_distance(a: Sample, b: Sample) -> float:
    """L^2 distance for fields, tuples of fields (vector fields) and plain arrays."""
    if isinstance(a, Field):
        return (a - b).l2_norm()
    if isinstance(a, (tuple, list)) and a and isinstance(a[0], Field):
        return float(np.sqrt(sum((x - y).l2_norm() ** 2 for x, y in zip(a, b))))
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def _zero_like(sample: Sample) -> Sample:
    if isinstance(sample, Field):
        return Field.zeros(sample.grid)
    if isinstance(sample, (tuple, list)) and sample and isinstance(sample[0], Field):
        return tuple(Field.zeros(c.grid) for c in sample)
    return np.zeros_like(np.asarray(sample))


@dataclass
class VariationSamples:
    """Samples v(t_0..t_J); with ``infinite_endpoint`` a final v(inf) = 0 is appended."""
    times: Sequence[float]
    values: List[Sample]
    infinite_endpoint: bool = False
    distance: Callable[[Sample, Sample], float] = field(default=default_distance, repr=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        if len(times) != len(self.values):
            raise PreconditionError("one time per sample is required", constraint="len(times) == len(values)")
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            raise PreconditionError("sample times must increase strictly", constraint="t_0 < ... < t_J")
        self.times = times

    def effective_values(self) -> List[Sample]:
        values = list(self.values)
        if self.infinite_endpoint and values:
            values.append(_zero_like(values[0]))
        return values

    def distance_matrix(self) -> np.ndarray:
        values = self.effective_values()
        size = len(values)
        D = np.zeros((size, size))
        for i in range(size):
            for j in range(i + 1, size):
                D[i, j] = D[j, i] = self.distance(values[i], values[j])
        return D

    def coarsened(self, limit: int) -> 'VariationSamples':
        """Evenly spaced subset keeping both ends."""
        keep = np.unique(np.round(np.linspace(0, len(self.values) - 1, limit)).astype(int))
        return VariationSamples(self.times[keep], [self.values[i] for i in keep],
                                self.infinite_endpoint, self.distance)


def best_chain_value(Dp: np.ndarray) -> float:
    """max over increasing index chains of sum Dp[a_{k-1}, a_k], summed left to right."""
    size = Dp.shape[0]
    if size == 0:
        return 0.0
    best = np.zeros(size)
    for j in range(1, size):
        candidates = best[:j] + Dp[:j, j]
        best[j] = max(0.0, float(candidates.max()))
    return float(best.max())


def vp_norm_discrete(samples: VariationSamples, p: float,
                     max_samples: int = MAX_EXACT_SAMPLES) -> float:
    """(sup over sub-partitions of sum ||v(t_j) - v(t_i)||^p)^(1/p), exact over the samples."""
    if not 1.0 <= p < np.inf:
        raise PreconditionError(f"variation exponent p={p} outside [1, inf)", constraint="1 <= p < inf")
    if len(samples.values) > max_samples:
        logger.warning(f"{len(samples.values)} samples exceed the exact limit {max_samples}; "
                       "coarsening the partition")
        samples = samples.coarsened(max_samples)
    Dp = samples.distance_matrix() ** p
    return best_chain_value(Dp) ** (1.0 / p)


def vp_norm_from_distances(D: np.ndarray, p: float) -> float:
    return best_chain_value(np.asarray(D, dtype=float) ** p) ** (1.0 / p)


@dataclass(frozen=True)
class EmbeddingCheck:
    p: float
    q: float
    vp: float
    vq: float
    max_increment: float

    @property
    def holds(self) -> bool:
        slack = 1e-12 * max(self.vp, 1.0)
        return self.vq <= self.vp + slack and self.max_increment <= self.vp + slack

    def as_dict(self) -> dict:
        return {'p': self.p, 'q': self.q, 'vp': self.vp, 'vq': self.vq,
                'max_increment': self.max_increment, 'holds': self.holds}


def embedding_check(samples: VariationSamples, p: float, q: float) -> EmbeddingCheck:
    """||v||_{V^q} <= ||v||_{V^p} for p < q, and every single increment is below ||v||_{V^p}."""
    if not p < q:
        raise PreconditionError(f"embedding needs p < q, got p={p}, q={q}", constraint="p < q")
    D = samples.distance_matrix()
    return EmbeddingCheck(p, q, vp_norm_from_distances(D, p), vp_norm_from_distances(D, q),
                          float(D.max()) if D.size else 0.0)
