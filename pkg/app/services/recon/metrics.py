"""
Error Metrics Module.

Relative-error maps restricted to the bright part of the reference
reconstruction, and the pixel fraction: the share of masked pixels whose
relative error does not exceed a threshold.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from app.models.arrays import ErrorReport, ReconImage
from app.utility.errors import ConfigurationError, EmptyMaskError, ShapeError

logger = logging.getLogger(__name__)

MASK_LEVEL = 0.15
CURVE_THRESHOLDS = np.round(np.linspace(0.0, 1.0, 101), 2)


def truth_mask(truth: np.ndarray) -> np.ndarray:
    """Pixels whose value exceeds 15 % of the maximum of `truth`."""
    return truth > MASK_LEVEL * np.max(truth)


def _fraction(errors: np.ndarray, threshold: float) -> float:
    return float(np.count_nonzero(errors <= threshold)) / errors.size


def fraction_curve(
    errors: np.ndarray, thresholds: Sequence[float] = CURVE_THRESHOLDS
) -> List[Tuple[float, float]]:
    """(threshold, pixel fraction) pairs over `thresholds`."""
    return [(float(t), _fraction(errors, float(t))) for t in thresholds]


def error_map(approx: ReconImage, truth: ReconImage) -> ErrorReport:
    """
    Pixel-wise |approx - truth| / truth on the mask of `truth`; NaN elsewhere.

    Raises:
        ShapeError: If the images differ in size.
        EmptyMaskError: If no truth pixel passes the mask level.
    """
    if approx.pixels.shape != truth.pixels.shape:
        raise ShapeError(f"images differ: {approx.pixels.shape} vs {truth.pixels.shape}")
    reference = truth.pixels
    mask = truth_mask(reference) if np.max(reference) > 0 else np.zeros(reference.shape, dtype=bool)
    if not mask.any():
        raise EmptyMaskError("reference reconstruction has no pixel above the mask level")

    errors = np.full(reference.shape, np.nan)
    errors[mask] = np.abs((approx.pixels[mask] - reference[mask]) / reference[mask])
    return ErrorReport(error_map=errors, mask=mask, curve=fraction_curve(errors[mask]))


def pixel_fraction(report: ErrorReport, threshold: float) -> float:
    """
    Share of masked pixels with relative error <= threshold.

    Raises:
        ConfigurationError: If threshold is negative.
        EmptyMaskError: If the report mask is empty.
    """
    if threshold < 0:
        raise ConfigurationError(f"threshold must be non-negative, got {threshold}")
    errors = report.masked_errors
    if errors.size == 0:
        raise EmptyMaskError("pixel fraction is undefined on an empty mask")
    return _fraction(errors, threshold)


def median_error_map(reports: Sequence[ErrorReport]) -> ErrorReport:
    """
    Per-pixel median of several error maps sharing one mask.

    Raises:
        ConfigurationError: If no report is given or the masks differ.
    """
    if not reports:
        raise ConfigurationError("at least one error report is required")
    mask = reports[0].mask
    for report in reports[1:]:
        if report.mask.shape != mask.shape or not np.array_equal(report.mask, mask):
            raise ConfigurationError("error reports have different masks")
    if len(reports) == 1:
        return reports[0]

    stacked = np.stack([report.error_map[mask] for report in reports])
    median = np.median(stacked, axis=0)
    errors = np.full(mask.shape, np.nan)
    errors[mask] = median
    logger.debug("Median error map over %d reports", len(reports))
    return ErrorReport(error_map=errors, mask=mask.copy(), curve=fraction_curve(median))
