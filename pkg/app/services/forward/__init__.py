"""
Package `app.services.forward`

Real-Time Approximate Forward Model and the synthetic ground truth.

Public API:
- build_response_tables(grid, array) -> ResponseTables
- full_sinogram(spec, grid, array, angles) -> Sinogram
- synthesize_ground_truth(spec, fidelity, seed) -> Sinogram

Modules:
- response: solid angles, r and c tables
- raytrace: compiled grid traversal for optical depths
- model: per-view flux, sinogram assembly, normalization, mesh study
- ground_truth: finer, noisy stand-in for a measured sinogram
"""

from .ground_truth import apply_poisson_noise, synthesize_ground_truth
from .model import (
    full_sinogram,
    normalize_sinogram,
    run_mesh_study,
    view_flux,
)
from .raytrace import line_integral, segment_depth
from .response import (
    build_response_tables,
    correction_factor,
    detector_response,
    solid_angle_fraction,
)

__all__ = [
    "apply_poisson_noise",
    "build_response_tables",
    "correction_factor",
    "detector_response",
    "full_sinogram",
    "line_integral",
    "normalize_sinogram",
    "run_mesh_study",
    "segment_depth",
    "solid_angle_fraction",
    "synthesize_ground_truth",
    "view_flux",
]
