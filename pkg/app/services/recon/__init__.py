from .fbp import fbp, filter_views, ramp_filter
from .metrics import (
    CURVE_THRESHOLDS,
    error_map,
    fraction_curve,
    median_error_map,
    pixel_fraction,
    truth_mask,
)

__all__ = [
    "CURVE_THRESHOLDS",
    "error_map",
    "fbp",
    "filter_views",
    "fraction_curve",
    "median_error_map",
    "pixel_fraction",
    "ramp_filter",
    "truth_mask",
]
