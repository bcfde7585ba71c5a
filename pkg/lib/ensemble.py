"""Deterministic parallel map over independent random trials."""
import concurrent.futures
from typing import Callable, List, Optional, Sequence, TypeVar, Union

import numpy as np

T = TypeVar('T')

_MAX_WORKERS = 1


def set_max_workers(workers: int) -> None:
    global _MAX_WORKERS
    _MAX_WORKERS = max(1, int(workers))


def max_workers() -> int:
    return _MAX_WORKERS


def trial_generators(seed: Union[int, Sequence[int]], size: int) -> List[np.random.Generator]:
    """One generator per trial, derived from (seed, trial index) only."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(size)]


def run_ensemble(trial: Callable[[np.random.Generator, int], T], size: int,
                 seed: Union[int, Sequence[int]],
                 workers: Optional[int] = None) -> List[T]:
    """Evaluate ``trial(rng, index)`` for every trial; results come back in index order."""
    generators = trial_generators(seed, size)
    workers = workers or _MAX_WORKERS
    if workers <= 1 or size <= 1:
        return [trial(rng, index) for index, rng in enumerate(generators)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [executor.submit(trial, rng, index) for index, rng in enumerate(generators)]
        return [future.result() for future in futures]


def parallel_map(func: Callable[..., T], items: list, workers: Optional[int] = None) -> List[T]:
    """Ordered map for independent deterministic work items."""
    workers = workers or _MAX_WORKERS
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))
