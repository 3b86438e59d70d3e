"""
POD Basis Module.

Thin SVD of the snapshot database, mode truncation and the information
variance captured by the leading modes.
"""

import logging
import warnings

import numpy as np
from scipy.linalg import svd

from app.models.arrays import PodBasis, SnapshotDatabase
from app.utility.errors import ConfigurationError, NumericalError, RankDeficiencyWarning

logger = logging.getLogger(__name__)


def _fix_signs(modes: np.ndarray) -> np.ndarray:
    # largest-magnitude entry of every mode is positive
    pivots = np.argmax(np.abs(modes), axis=0)
    signs = np.sign(modes[pivots, np.arange(modes.shape[1])])
    signs[signs == 0] = 1.0
    return modes * signs


def decompose(matrix: np.ndarray):
    """
    Thin SVD with deterministic mode signs.

    Singular values below the numerical-rank tolerance are set to zero.

    Returns:
        Tuple[np.ndarray, np.ndarray, int]: modes, singular values, numerical rank.
    """
    modes, singular_values, _ = svd(matrix, full_matrices=False)
    if singular_values.size and singular_values[0] > 0:
        tolerance = singular_values[0] * max(matrix.shape) * np.finfo(float).eps
    else:
        tolerance = 0.0
    singular_values = np.where(singular_values > tolerance, singular_values, 0.0)
    rank = int(np.count_nonzero(singular_values))
    return _fix_signs(modes), singular_values, rank


def build_basis(db: SnapshotDatabase, k: int) -> PodBasis:
    """
    Builds the POD space of a snapshot database.

    Args:
        db (SnapshotDatabase): Sampled views.
        k (int): Modes to retain, 1 <= k <= min(N, N_s).

    Returns:
        PodBasis: Leading k modes and the full spectrum.

    Raises:
        ConfigurationError: If k is out of range.
        NumericalError: If the database is identically zero.
    """
    n_rows, n_cols = db.matrix.shape
    if not 1 <= k <= min(n_rows, n_cols):
        raise ConfigurationError(f"k={k} outside [1, {min(n_rows, n_cols)}]")

    modes, singular_values, rank = decompose(db.matrix)
    if rank == 0:
        raise NumericalError("snapshot database is identically zero")
    if rank < k:
        message = f"database rank {rank} is below k={k}; keeping {rank} modes"
        logger.warning(message)
        warnings.warn(message, RankDeficiencyWarning, stacklevel=2)
        k = rank

    return PodBasis(
        modes=np.ascontiguousarray(modes[:, :k]),
        singular_values=singular_values,
        normalized_spectrum=singular_values / singular_values.sum(),
        k=k,
    )


def information_variance(basis: PodBasis, j: int) -> float:
    """Fraction of the normalized spectrum carried by the first j modes."""
    length = basis.singular_values.size
    if not 0 <= j <= length:
        raise ConfigurationError(f"j={j} outside [0, {length}]")
    if j == 0:
        return 0.0
    return float(basis.cumulative_variance[j - 1])


def modes_for_variance(basis: PodBasis, target: float) -> int:
    """Smallest j whose information variance reaches `target`."""
    if not 0.0 < target <= 1.0:
        raise ConfigurationError(f"variance target must lie in (0, 1], got {target}")
    return int(np.argmax(basis.cumulative_variance >= target)) + 1


def mode_agreement(sampled: PodBasis, full: PodBasis, count: int) -> np.ndarray:
    """
    |<u_i^sampled, u_i^full>| for the first `count` modes; 1 means the sampled
    database recovered the mode of the full sinogram.
    """
    if sampled.modes.shape[0] != full.modes.shape[0]:
        raise ConfigurationError("bases live in different detector spaces")
    if not 1 <= count <= min(sampled.k, full.k):
        raise ConfigurationError(f"count={count} outside [1, {min(sampled.k, full.k)}]")
    return np.abs(np.sum(sampled.modes[:, :count] * full.modes[:, :count], axis=0))


def spectrum_basis(matrix: np.ndarray) -> PodBasis:
    """
    Every non-zero mode of a matrix with its full spectrum, e.g. the
    reference POD space of a complete sinogram.

    Raises:
        NumericalError: If the matrix is identically zero.
    """
    modes, singular_values, rank = decompose(np.asarray(matrix, dtype=float))
    if rank == 0:
        raise NumericalError("the spectrum of a zero matrix is undefined")
    return PodBasis(
        modes=np.ascontiguousarray(modes[:, :rank]),
        singular_values=singular_values,
        normalized_spectrum=singular_values / singular_values.sum(),
        k=rank,
    )
