"""
Synthetic Ground Truth Module.

Stands in for a measured sinogram when none is available. The synthetic
truth is deliberately richer than the Real-Time Model:

- a finer pixel grid;
- detector faces split into sub-elements along y, each traced separately
  and summed back into its detector row;
- optional Gaussian blur across detector rows;
- optional Poisson counting noise at a configurable count scale.

With noise and blur disabled, one sub-element and the Real-Time grid, the
result equals the normalized Real-Time sinogram exactly.
"""

import logging
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter1d

from app.models.arrays import Sinogram
from app.models.schemas import AssemblySpec, DetectorArray, FidelityConfig, GridSpec
from app.services.forward.model import check_angles, element_flux, normalize_sinogram
from app.services.forward.response import element_tables
from app.services.geometry.assembly import rasterize
from app.utility.errors import ConfigurationError

logger = logging.getLogger(__name__)


def sub_element_centers(array: DetectorArray, subsampling: int) -> np.ndarray:
    """Face-center y of every sub-element, detector-major (shape n_detectors * subsampling)."""
    centers = array.element_centers()
    if subsampling == 1:
        return centers
    width = array.face_width / subsampling
    offsets = -array.face_width / 2.0 + (np.arange(subsampling) + 0.5) * width
    return (centers[:, None] + offsets[None, :]).ravel()


def apply_poisson_noise(
    values: np.ndarray, count_scale: float, rng: np.random.Generator
) -> np.ndarray:
    """
    Draws Poisson counts with mean count_scale * values and scales them back.

    Raises:
        ConfigurationError: If count_scale is not positive.
    """
    if count_scale <= 0:
        raise ConfigurationError(f"count_scale must be positive, got {count_scale}")
    expected = np.clip(np.asarray(values, dtype=float), 0.0, None) * count_scale
    return rng.poisson(expected).astype(float) / count_scale


def synthesize_ground_truth(
    spec: AssemblySpec,
    fidelity: FidelityConfig,
    seed: int,
    array: Optional[DetectorArray] = None,
    angles: Optional[Sequence[float]] = None,
    dz: float = 10.0,
    half_extent_z: float = 50.0,
    workers: Optional[int] = None,
) -> Sinogram:
    """
    Builds a normalized N x 360 ground-truth sinogram.

    Args:
        spec (AssemblySpec): Assembly layout and materials.
        fidelity (FidelityConfig): Grid refinement, face sub-sampling, blur and noise.
        seed (int): Seed of the Poisson draw.
        array (Optional[DetectorArray]): Detector geometry; default instrument when omitted.
        angles (Optional[Sequence[float]]): Views; 0..359 degrees when omitted.
        dz (float): Voxel height in mm.
        half_extent_z (float): Half height of the voxel columns in mm.
        workers (Optional[int]): Table-building pool size and flux-kernel threads.

    Returns:
        Sinogram: Normalized, deterministic for a fixed seed.

    Raises:
        ConfigurationError: If count_scale <= 0.
    """
    if fidelity.count_scale <= 0:
        raise ConfigurationError(f"count_scale must be positive, got {fidelity.count_scale}")
    array = array or DetectorArray()
    views = check_angles(np.arange(360.0) if angles is None else angles)
    grid = GridSpec.enclosing(spec, fidelity.dx, dz=dz, half_extent_z=half_extent_z)

    subsampling = fidelity.face_subsampling
    face_y = sub_element_centers(array, subsampling)
    tables = element_tables(
        grid,
        array.standoff_radius,
        face_y,
        array.face_width / subsampling,
        array.face_height,
        workers,
        support_radius=spec.circumscribed_radius(),
    )
    logger.info(
        "Synthesizing ground truth: dx=%.3f mm, %d sub-elements per face, %d views",
        fidelity.dx, subsampling, views.size,
    )

    columns = []
    for angle in views:
        material = rasterize(spec, grid, float(angle))
        flux = element_flux(material, tables, array.standoff_radius, face_y, workers)
        columns.append(flux.reshape(array.n_detectors, subsampling).sum(axis=1))
    truth = normalize_sinogram(Sinogram(values=np.column_stack(columns), angles=views))

    values = truth.values
    if fidelity.blur_rows > 0:
        values = gaussian_filter1d(values, sigma=fidelity.blur_rows, axis=0, mode="nearest")
    if fidelity.poisson_noise:
        values = apply_poisson_noise(values, fidelity.count_scale, np.random.default_rng(seed))
    return normalize_sinogram(Sinogram(values=values, angles=views))
