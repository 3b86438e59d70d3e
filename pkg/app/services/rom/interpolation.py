"""
Interpolation Module.

PODI baselines and plain data interpolation. Every interpolator is periodic
in the view angle with period 360 degrees.
"""

import logging
from typing import Literal, Sequence

import numpy as np
from scipy.interpolate import RBFInterpolator

from app.models.arrays import CoefficientMatrix, PodBasis, Sinogram, SnapshotDatabase
from app.utility.errors import ConfigurationError, ShapeError

logger = logging.getLogger(__name__)

PERIOD = 360.0
RBF_SMOOTHING = 1e-8


def _check_knots(db: SnapshotDatabase) -> np.ndarray:
    angles = np.asarray(db.sampled_angles, dtype=float)
    if angles.size < 2:
        raise ConfigurationError("interpolation needs at least two sampled views")
    if np.unique(angles).size != angles.size:
        raise ConfigurationError("sampled angles must be distinct")
    return angles


def _check_targets(target_angles: Sequence[float]) -> np.ndarray:
    targets = np.asarray(target_angles, dtype=float).ravel()
    if targets.size == 0 or targets.min() < 0.0 or targets.max() >= PERIOD:
        raise ConfigurationError("target angles must be a non-empty list inside [0, 360)")
    return targets


def periodic_linear(knots: np.ndarray, values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Row-wise linear interpolation of `values` (rows x knots) wrapping at 360 degrees."""
    order = np.argsort(knots)
    knots, values = knots[order], values[:, order]
    return np.vstack([np.interp(targets, knots, row, period=PERIOD) for row in values])


def periodic_rbf(knots: np.ndarray, values: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """
    Gaussian RBF interpolation of every row, with one tiled copy of the knots
    on each side of the seam. The shape length is the mean gap between
    consecutive sorted knots (seam gap included).
    """
    order = np.argsort(knots)
    knots, values = knots[order], values[:, order]
    gaps = np.diff(np.append(knots, knots[0] + PERIOD))
    epsilon = 1.0 / float(np.mean(gaps))

    tiled = np.concatenate([knots - PERIOD, knots, knots + PERIOD])[:, None]
    data = np.tile(values, 3).T
    interpolator = RBFInterpolator(
        tiled, data, kernel="gaussian", epsilon=epsilon, smoothing=RBF_SMOOTHING
    )
    return interpolator(targets[:, None]).T


def podi_coefficients(
    basis: PodBasis,
    db: SnapshotDatabase,
    target_angles: Sequence[float],
    scheme: Literal["linear", "rbf"],
) -> CoefficientMatrix:
    """
    Interpolates the sampled projections U^T S^ to the target views.

    Args:
        basis (PodBasis): POD space.
        db (SnapshotDatabase): Sampled views (at least two, distinct).
        target_angles (Sequence[float]): Views to estimate.
        scheme (str): "linear" or "rbf".

    Returns:
        CoefficientMatrix: k x len(target_angles).
    """
    knots = _check_knots(db)
    targets = _check_targets(target_angles)
    if basis.modes.shape[0] != db.matrix.shape[0]:
        raise ShapeError("database and basis have different detector counts")

    sampled = basis.modes.T @ db.matrix
    if scheme == "linear":
        values, source = periodic_linear(knots, sampled, targets), "interpolated-linear"
    elif scheme == "rbf":
        values, source = periodic_rbf(knots, sampled, targets), "interpolated-rbf"
    else:
        raise ConfigurationError(f"unknown interpolation scheme '{scheme}'")
    logger.debug("PODI %s: %d knots -> %d views", scheme, knots.size, targets.size)
    return CoefficientMatrix(values=values, source=source, angles=targets)


def linear_data_interpolation(db: SnapshotDatabase, target_angles: Sequence[float]) -> Sinogram:
    """Interpolates every detector row of the database directly, without POD."""
    knots = _check_knots(db)
    targets = _check_targets(target_angles)
    return Sinogram(values=periodic_linear(knots, db.matrix, targets), angles=targets)
