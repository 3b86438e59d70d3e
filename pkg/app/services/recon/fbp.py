"""
Filtered Backprojection Module.

Ramp-filtered FBP on an N x N image whose pixel equals one detector pitch.
Image column j sits at x = j - c and row i at y = c - i, with
c = (N - 1) / 2, so row 0 is the top of the image. A point (x, y) of the
assembly rotated by theta is seen at detector coordinate
t = x sin(theta) + y cos(theta) + c, matching the forward model.
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy.fft import fft, ifft

from app.models.arrays import ReconImage, Sinogram
from app.utility.errors import ConfigurationError, NumericalError
from app.utility.parallel import ordered_map

logger = logging.getLogger(__name__)

VIEW_CHUNK = 30
_FULL_TURN = np.arange(360.0)


def padded_length(n_rows: int) -> int:
    """Next power of two >= 2 * n_rows."""
    return int(2 ** math.ceil(math.log2(2 * n_rows)))


def ramp_filter(size: int) -> np.ndarray:
    """Frequency response of the band-limited ramp filter built in the spatial domain."""
    n = np.concatenate(
        (np.arange(1, size / 2 + 1, 2, dtype=int), np.arange(size / 2 - 1, 0, -2, dtype=int))
    )
    kernel = np.zeros(size)
    kernel[0] = 0.25
    kernel[1::2] = -1.0 / (np.pi * n) ** 2
    return 2.0 * np.real(fft(kernel))


def filter_views(values: np.ndarray) -> np.ndarray:
    """Applies the ramp filter to every column (view) of a sinogram matrix."""
    n_rows = values.shape[0]
    size = padded_length(n_rows)
    padded = np.zeros((size, values.shape[1]))
    padded[:n_rows] = values
    filtered = np.real(ifft(fft(padded, axis=0) * ramp_filter(size)[:, None], axis=0))
    return filtered[:n_rows]


def _backproject(filtered: np.ndarray, angles: np.ndarray) -> np.ndarray:
    n_rows = filtered.shape[0]
    center = (n_rows - 1) / 2.0
    offsets = np.arange(n_rows) - center
    x = offsets[None, :]
    y = -offsets[:, None]
    detector = np.arange(n_rows, dtype=float)

    image = np.zeros((n_rows, n_rows))
    for column, angle in enumerate(np.deg2rad(angles)):
        t = x * math.sin(angle) + y * math.cos(angle) + center
        image += np.interp(t.ravel(), detector, filtered[:, column], left=0.0, right=0.0).reshape(
            n_rows, n_rows
        )
    return image


def fbp(sinogram: Sinogram, pixel_size: float = 1.0, workers: Optional[int] = None) -> ReconImage:
    """
    Reconstructs an N x N image from an N-row sinogram.

    Views are backprojected in fixed chunks that are summed in angle order,
    so the image does not depend on the number of workers.

    Args:
        sinogram (Sinogram): Rows are detectors, columns are views.
        pixel_size (float): Physical size of one detector pitch in mm.
        workers (Optional[int]): Pool size for the view chunks.

    Returns:
        ReconImage: Reconstruction scaled by pi / (2 * N_views).

    Raises:
        ConfigurationError: With fewer than two views.
        NumericalError: If the sinogram holds non-finite values.
    """
    if sinogram.n_views < 2:
        raise ConfigurationError("filtered backprojection needs at least two views")
    if not np.all(np.isfinite(sinogram.values)):
        raise NumericalError("sinogram contains non-finite values")
    if sinogram.n_views != _FULL_TURN.size or not np.array_equal(sinogram.angles, _FULL_TURN):
        logger.warning(
            "FBP over %d views that are not the full 1-degree turn", sinogram.n_views
        )

    filtered = filter_views(sinogram.values)
    starts = range(0, sinogram.n_views, VIEW_CHUNK)
    partials = ordered_map(
        lambda s: _backproject(filtered[:, s:s + VIEW_CHUNK], sinogram.angles[s:s + VIEW_CHUNK]),
        starts,
        workers,
    )
    image = np.zeros_like(partials[0])
    for partial in partials:
        image += partial
    return ReconImage(pixels=image * (np.pi / (2 * sinogram.n_views)), pixel_size=pixel_size)
