"""Deterministic, optionally threaded Monte Carlo reduction."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .sampling import BLOCK_SIZE, SeededStream

# work unit handed to a worker; fixed so the reduction never depends on threads
CHUNK = 16 * BLOCK_SIZE


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    n_samples: int
    seed: int

    @classmethod
    def from_samples(cls, values: np.ndarray, seed: int) -> "MonteCarloEstimate":
        values = np.asarray(values, dtype=float)
        n = values.size
        if n < 2:
            raise DomainError("need at least two samples for a standard error")
        mean = float(np.mean(values))
        se = float(np.std(values, ddof=1) / np.sqrt(n))
        return cls(mean, se, n, seed)

    def scaled(self, c: float) -> "MonteCarloEstimate":
        return MonteCarloEstimate(c * self.mean, abs(c) * self.std_error, self.n_samples, self.seed)

    def to_dict(self) -> dict:
        return asdict(self)


def combined_se(*estimates: MonteCarloEstimate) -> float:
    return float(np.sqrt(sum(e.std_error**2 for e in estimates)))


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def sample_values(integrand: Callable[[int, int], np.ndarray], n_samples: int,
                  threads: int | None = 1) -> np.ndarray:
    """Evaluate ``integrand(offset, count)`` over ``[0, n_samples)`` in fixed chunks.

    Chunk boundaries depend only on ``n_samples``; results are concatenated
    in index order, so the returned array is identical for any ``threads``.
    """
    if n_samples < 1:
        raise DomainError("n_samples must be positive")
    chunks = [(lo, min(CHUNK, n_samples - lo)) for lo in range(0, n_samples, CHUNK)]
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or len(chunks) == 1:
        parts = [integrand(lo, m) for lo, m in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: integrand(*c), chunks))
    return np.concatenate([np.asarray(p, dtype=float) for p in parts])


def estimate(integrand: Callable[[int, int], np.ndarray], n_samples: int,
             stream: SeededStream, threads: int | None = 1) -> MonteCarloEstimate:
    return MonteCarloEstimate.from_samples(sample_values(integrand, n_samples, threads), stream.seed)
