"""Reproducible splittable random streams.

Every stochastic routine in the package draws from ``substream(seed, index)``,
a counter-based generator addressed by (master seed, stream index).  Parallel
work assigns stream indices to tasks up front, so results depend only on the
seed and the task numbering -- never on scheduling or worker count.
"""

from __future__ import annotations

import concurrent.futures
import os

import numpy as np


def substream(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for substream ``stream`` of ``seed``."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream),))
    return np.random.Generator(np.random.Philox(ss))


def default_workers() -> int:
    """Worker count from the SPIKELAND_WORKERS environment variable (min 1)."""
    raw = os.environ.get("SPIKELAND_WORKERS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items, workers: int = 1):
    """Map ``fn`` over ``items`` with identical results for any worker count.

    ``fn`` must be picklable (module level) when workers > 1; tasks must take
    their randomness from per-item seeds rather than shared state.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    chunk = max(1, len(items) // (4 * workers))
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunk))
