"""
Worker Pool and Seeding Helpers.

Independent jobs (trials, response-table rows, backprojection chunks) are
mapped over a bounded thread pool. Results always come back in input order, so every
aggregate downstream is independent of the pool size. NumPy, SciPy and the
compiled ray tracer release the GIL.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

import numpy as np

from app.utility.config import PGET_WORKERS

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: Optional[int] = None) -> List[R]:
    """
    Applies `func` to every item, possibly concurrently, preserving order.

    Args:
        func (Callable): Pure function of one item.
        items (Iterable): Work items.
        workers (Optional[int]): Pool size; defaults to PGET_WORKERS. 1 runs inline.

    Returns:
        List: `[func(item) for item in items]`.
    """
    items = list(items)
    n_workers = PGET_WORKERS if workers is None else workers
    if n_workers < 1:
        raise ValueError(f"workers must be >= 1, got {n_workers}")

    if n_workers == 1 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("Mapping %d jobs over %d workers", len(items), n_workers)
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(func, items))


def derive_seed(master_seed: int, *indices: int) -> int:
    """
    Derives the seed of one job from the master seed and the job coordinates
    (for example the sampled-view count and the trial index).

    Uses NumPy's SeedSequence hashing: jobs are statistically independent and
    the mapping (master_seed, *indices) -> seed is fixed.
    """
    sequence = np.random.SeedSequence([int(master_seed), *(int(i) for i in indices)])
    return int(sequence.generate_state(1, dtype=np.uint32)[0])
