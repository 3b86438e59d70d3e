"""
Snapshot Database Module.

Random sparse-view sampling of a full sinogram: the sampled columns form the
database matrix from which the POD space is built.
"""

import logging

import numpy as np

from app.models.arrays import Sinogram, SnapshotDatabase
from app.utility.errors import ConfigurationError

logger = logging.getLogger(__name__)


def sample_views(sinogram: Sinogram, n_s: int, seed: int) -> SnapshotDatabase:
    """
    Draws n_s distinct views uniformly without replacement.

    Args:
        sinogram (Sinogram): Full ground-truth sinogram.
        n_s (int): Number of views to keep.
        seed (int): Seed of the generator; equal seeds give equal view sets.

    Returns:
        SnapshotDatabase: Columns copied from `sinogram`, in increasing angle order.

    Raises:
        ConfigurationError: If n_s is outside [1, N_views].
    """
    n_views = sinogram.n_views
    if not 1 <= n_s <= n_views:
        raise ConfigurationError(f"n_s={n_s} outside [1, {n_views}]")

    rng = np.random.default_rng(seed)
    indices = np.sort(rng.choice(n_views, size=n_s, replace=False))
    logger.debug("Sampled %d of %d views with seed %d", n_s, n_views, seed)
    return SnapshotDatabase(
        matrix=sinogram.values[:, indices].copy(),
        sampled_angles=sinogram.angles[indices].copy(),
        indices=indices,
    )
