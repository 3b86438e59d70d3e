"""
Package `app.services.rom`

Reduced-order core: snapshot sampling, POD basis, physics-aware and
interpolated coefficients, reconstruction of full sinograms.
"""

from .coefficients import (
    coefficient_report,
    ground_truth_coefficients,
    papod_coefficients,
    reconstruct,
    sampled_coefficients,
)
from .interpolation import linear_data_interpolation, podi_coefficients
from .pod import (
    build_basis,
    decompose,
    information_variance,
    mode_agreement,
    modes_for_variance,
    spectrum_basis,
)
from .snapshots import sample_views

__all__ = [
    "build_basis",
    "coefficient_report",
    "decompose",
    "ground_truth_coefficients",
    "information_variance",
    "linear_data_interpolation",
    "mode_agreement",
    "modes_for_variance",
    "papod_coefficients",
    "podi_coefficients",
    "reconstruct",
    "sample_views",
    "sampled_coefficients",
    "spectrum_basis",
]
