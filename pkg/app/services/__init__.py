"""
Package `app.services`

Pipeline stages, in dependency order:
- geometry: assembly layouts and material maps
- forward: Real-Time Model and synthetic ground truth
- rom: snapshots, POD basis and coefficient estimators
- recon: filtered backprojection and error metrics
- storage: artifacts, CSV import and image export
- bench: experiments over random view sets
"""

from .forward import full_sinogram, synthesize_ground_truth
from .recon import error_map, fbp, pixel_fraction
from .rom import build_basis, papod_coefficients, podi_coefficients, reconstruct, sample_views
from .bench import run_comparison, run_convergence, run_spectrum

__all__ = [
    "run_comparison",
    "run_convergence",
    "run_spectrum",
    "full_sinogram",
    "synthesize_ground_truth",
    "error_map",
    "fbp",
    "pixel_fraction",
    "build_basis",
    "papod_coefficients",
    "podi_coefficients",
    "reconstruct",
    "sample_views",
]
