"""
Real-Time Model Module.

Assembles the Lambert-Beer flux of every detector for a rotated assembly:

    flux_i = sum_p r_{i,p} * exp(-c_{i,p} * d_{i,p}^T mu) * lam_p

Only emitting pixels (lam != 0) are traced. The response tables do not
depend on the angle, so one set is built and reused for every view. Views
are evaluated one after the other; the worker count sets the threads of
the compiled flux kernel, which runs the detectors in parallel.
"""

import logging
import threading
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numba
import numpy as np

from app.models.arrays import MaterialMap, ResponseTables, Sinogram
from app.models.schemas import AssemblySpec, DetectorArray, GridSpec
from app.services.forward.raytrace import flux_kernel, split_background
from app.services.forward.response import build_response_tables
from app.services.geometry.assembly import rasterize
from app.utility.config import PGET_WORKERS
from app.utility.errors import ConfigurationError, NumericalError, ShapeError

logger = logging.getLogger(__name__)


# the parallel flux kernel is launched by one thread at a time
_KERNEL_LOCK = threading.Lock()


def kernel_threads(workers: Optional[int] = None) -> int:
    """Threads given to one flux-kernel launch: `workers`, capped by numba's pool."""
    requested = PGET_WORKERS if workers is None else workers
    if requested < 1:
        raise ConfigurationError(f"workers must be >= 1, got {requested}")
    return min(int(requested), numba.config.NUMBA_NUM_THREADS)


def element_flux(
    material: MaterialMap,
    tables: ResponseTables,
    face_x: float,
    face_y: np.ndarray,
    workers: Optional[int] = None,
) -> np.ndarray:
    """
    Flux of every element whose face center is (face_x, face_y[i]).

    The result does not depend on `workers`: each element sums its pixels
    in index order.
    """
    grid = material.grid
    face_y = np.ascontiguousarray(face_y, dtype=np.float64)
    if tables.n_pix != grid.n_pix or tables.n_detectors != face_y.size:
        raise ShapeError(
            f"tables are {tables.n_detectors} x {tables.n_pix}, "
            f"expected {face_y.size} x {grid.n_pix}"
        )

    emitters = np.flatnonzero(material.lam != 0.0).astype(np.int64)
    out = np.zeros(face_y.size, dtype=np.float64)
    if emitters.size == 0:
        return out

    background, excess, excess_origin = split_background(
        np.ascontiguousarray(material.mu_image(), dtype=np.float64), grid.origin, grid.dx
    )
    threads = kernel_threads(workers)
    with _KERNEL_LOCK:
        numba.set_num_threads(threads)
        flux_kernel(
            grid.n_side,
            grid.origin,
            grid.dx,
            background,
            excess,
            excess_origin,
            emitters,
            np.ascontiguousarray(material.lam[emitters], dtype=np.float64),
            np.ascontiguousarray(tables.r, dtype=np.float64),
            np.ascontiguousarray(tables.c, dtype=np.float64),
            float(face_x),
            face_y,
            out,
        )
    return out


def view_flux(
    material: MaterialMap,
    tables: ResponseTables,
    array: DetectorArray,
    workers: Optional[int] = None,
) -> np.ndarray:
    """
    Computes the flux at every detector for one rasterized view.

    Args:
        material (MaterialMap): Rotated emission and attenuation.
        tables (ResponseTables): Tables built for the same grid and array.
        array (DetectorArray): Detector geometry.
        workers (Optional[int]): Kernel threads; defaults to PGET_WORKERS.

    Returns:
        np.ndarray: N non-negative fluxes.

    Raises:
        ShapeError: If the tables do not match the grid or the array.
    """
    return element_flux(material, tables, array.standoff_radius, array.element_centers(), workers)


def check_angles(angles: Sequence[float]) -> np.ndarray:
    """Validates a view list: non-empty, inside [0, 360), strictly increasing."""
    values = np.asarray(angles, dtype=float).ravel()
    if values.size == 0:
        raise ConfigurationError("at least one view angle is required")
    if values.min() < 0.0 or values.max() >= 360.0:
        raise ConfigurationError("view angles must lie in [0, 360)")
    if np.any(np.diff(values) <= 0.0):
        raise ConfigurationError("view angles must be strictly increasing")
    return values


def full_sinogram(
    spec: AssemblySpec,
    grid: GridSpec,
    array: DetectorArray,
    angles: Sequence[float],
    tables: Optional[ResponseTables] = None,
    workers: Optional[int] = None,
) -> Sinogram:
    """
    Evaluates the Real-Time Model at every angle.

    Args:
        spec (AssemblySpec): Assembly layout and materials.
        grid (GridSpec): Investigation domain.
        array (DetectorArray): Detector geometry.
        angles (Sequence[float]): View angles in degrees.
        tables (Optional[ResponseTables]): Prebuilt tables; built once when omitted,
            restricted to the disk the rotating lattice can reach.
        workers (Optional[int]): Table-building pool size and flux-kernel threads.

    Returns:
        Sinogram: N x len(angles), not normalized.
    """
    values = check_angles(angles)
    if tables is None:
        tables = build_response_tables(
            grid, array, workers, support_radius=spec.circumscribed_radius()
        )

    columns = []
    for angle in values:
        flux = view_flux(rasterize(spec, grid, float(angle)), tables, array, workers)
        logger.debug("View %.3f deg: total flux %.6g", angle, float(flux.sum()))
        columns.append(flux)
    logger.info(
        "Real-Time Model sinogram assembled: %d detectors x %d views", array.n_detectors, values.size
    )
    return Sinogram(values=np.column_stack(columns), angles=values, normalized=False)


def normalize_sinogram(sinogram: Sinogram) -> Sinogram:
    """
    Global min-max normalization to [0, 1].

    Raises:
        NumericalError: If the sinogram is constant.
    """
    values = sinogram.values
    low, high = float(values.min()), float(values.max())
    if high == low:
        if values.size == 1:
            logger.warning("Normalizing a 1x1 sinogram: value set to 0")
            return Sinogram(values=np.zeros_like(values), angles=sinogram.angles, normalized=True)
        raise NumericalError("cannot normalize a constant sinogram")
    scaled = (values - low) / (high - low)
    return Sinogram(values=scaled, angles=sinogram.angles, normalized=True)


def run_mesh_study(
    spec: AssemblySpec,
    array: DetectorArray,
    angles: Sequence[float],
    sizes: Sequence[float] = (2.5, 1.0, 0.5),
    dz: float = 10.0,
    half_extent_z: float = 50.0,
    workers: Optional[int] = None,
) -> List[Tuple[float, float, float]]:
    """
    Compares normalized Real-Time Model sinograms across pixel sizes.

    Returns:
        List[Tuple[float, float, float]]: (dx_a, dx_b, mean absolute difference)
        for every pair of sizes.
    """
    if len(sizes) < 2:
        raise ConfigurationError("a mesh study needs at least two pixel sizes")
    sinograms = {}
    for size in sizes:
        grid = GridSpec.enclosing(spec, size, dz=dz, half_extent_z=half_extent_z)
        sinograms[size] = normalize_sinogram(full_sinogram(spec, grid, array, angles, workers=workers))
        logger.info("Mesh study: dx=%.3f mm done (%d pixels)", size, grid.n_pix)

    pairs = []
    for a, b in combinations(sizes, 2):
        difference = float(np.mean(np.abs(sinograms[a].values - sinograms[b].values)))
        pairs.append((float(a), float(b), difference))
    return pairs
