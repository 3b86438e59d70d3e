"""
Detector Response Module.

Purely geometric quantities of the Real-Time Model, independent of the
rotation angle:

- r_{i,p}: mean over the voxel column of pixel p of the solid angle that
  detector face i subtends at each voxel barycenter, divided by 4*pi;
- c_{i,p}: r-weighted mean of 1/cos(alpha_s), alpha_s being the elevation
  of voxel s seen from the detector center.

The face of detector i is the rectangle of width face_width (along y) and
height face_height (along z) centered at (standoff_radius, y_i, 0) in the
plane x = standoff_radius.
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np

from app.models.arrays import ResponseTables
from app.models.schemas import DetectorArray, GridSpec
from app.services.geometry.assembly import voxel_centers
from app.utility.errors import ConfigurationError, GeometryError
from app.utility.parallel import ordered_map

logger = logging.getLogger(__name__)

_FOUR_PI = 4.0 * math.pi


def _corner_term(u: np.ndarray, v: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.arctan(u * v / (d * np.sqrt(u * u + v * v + d * d)))


def rectangle_solid_angle(
    u1: np.ndarray, u2: np.ndarray, v1: np.ndarray, v2: np.ndarray, d: np.ndarray
) -> np.ndarray:
    """
    Solid angle of the rectangle [u1, u2] x [v1, v2] lying in a plane at
    distance d, with (u, v) measured from the foot of the perpendicular.
    """
    return (
        _corner_term(u2, v2, d)
        - _corner_term(u1, v2, d)
        - _corner_term(u2, v1, d)
        + _corner_term(u1, v1, d)
    )


def _face_fractions(
    px: np.ndarray,
    py: np.ndarray,
    pz: np.ndarray,
    face_x: float,
    face_y: float,
    face_width: float,
    face_height: float,
) -> np.ndarray:
    distance = face_x - px
    if np.any(distance <= 0.0):
        raise GeometryError("voxel lies on or behind the detector face plane")
    omega = rectangle_solid_angle(
        face_y - face_width / 2.0 - py,
        face_y + face_width / 2.0 - py,
        -face_height / 2.0 - pz,
        face_height / 2.0 - pz,
        distance,
    )
    return omega / _FOUR_PI


def _inverse_cosines(
    px: np.ndarray, py: np.ndarray, pz: np.ndarray, face_x: float, face_y: float
) -> np.ndarray:
    planar = np.hypot(face_x - px, face_y - py)
    if np.any(planar == 0.0):
        raise GeometryError("voxel directly above or below the detector: elevation is 90 degrees")
    return np.sqrt(planar * planar + pz * pz) / planar


def _check_detector(detector: int, array: DetectorArray) -> None:
    if not 0 <= detector < array.n_detectors:
        raise ConfigurationError(f"detector {detector} outside [0, {array.n_detectors})")


def solid_angle_fraction(voxel_center: np.ndarray, detector: int, array: DetectorArray) -> float:
    """
    Returns Omega / (4*pi) of detector face `detector` seen from a 3-D point.

    Raises:
        GeometryError: If the point is not strictly in front of the face plane.
    """
    _check_detector(detector, array)
    point = np.asarray(voxel_center, dtype=float).reshape(3)
    fraction = _face_fractions(
        point[0:1], point[1:2], point[2:3],
        array.standoff_radius,
        float(array.element_centers()[detector]),
        array.face_width,
        array.face_height,
    )
    return float(fraction[0])


def _pixel_voxels(grid: GridSpec, pixel: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    points = voxel_centers(grid, pixel)
    return points[:, 0], points[:, 1], points[:, 2]


def detector_response(detector: int, pixel: int, grid: GridSpec, array: DetectorArray) -> float:
    """r_{i,p}: average solid-angle fraction over the voxel column of `pixel`."""
    _check_detector(detector, array)
    px, py, pz = _pixel_voxels(grid, pixel)
    fractions = _face_fractions(
        px, py, pz,
        array.standoff_radius,
        float(array.element_centers()[detector]),
        array.face_width,
        array.face_height,
    )
    return float(np.mean(fractions))


def correction_factor(detector: int, pixel: int, grid: GridSpec, array: DetectorArray) -> float:
    """
    c_{i,p}: response-weighted mean of 1/cos(alpha_s) over the voxel column.

    Raises:
        GeometryError: If a voxel sits at 90 degrees elevation.
    """
    _check_detector(detector, array)
    px, py, pz = _pixel_voxels(grid, pixel)
    face_y = float(array.element_centers()[detector])
    fractions = _face_fractions(
        px, py, pz, array.standoff_radius, face_y, array.face_width, array.face_height
    )
    weights = _inverse_cosines(px, py, pz, array.standoff_radius, face_y)
    return float(np.sum(fractions * weights) / np.sum(fractions))


def element_tables(
    grid: GridSpec,
    face_x: float,
    element_y: np.ndarray,
    face_width: float,
    face_height: float,
    workers: Optional[int] = None,
    support_radius: Optional[float] = None,
) -> ResponseTables:
    """
    Builds r and c for arbitrary detector elements sharing one face plane.

    Rows are computed independently (one job per element) into preallocated
    tables, so the result does not depend on the number of workers. With a
    `support_radius`, only pixels whose center lies within support_radius + dx
    of the rotation axis are computed; the others keep r = 0 and c = 1.
    """
    half_width = grid.n_side * grid.dx / 2.0
    if face_x <= half_width:
        raise GeometryError(
            f"detector plane at {face_x} mm lies inside the grid (half width {half_width:.3f} mm)"
        )
    element_y = np.asarray(element_y, dtype=float).ravel()

    xs, ys = grid.pixel_centers()
    if support_radius is None:
        support = np.arange(grid.n_pix)
    else:
        support = np.flatnonzero(np.hypot(xs, ys) <= support_radius + grid.dx)
    heights = grid.voxel_heights()
    # (n_support, n_vox) voxel coordinates
    px = np.repeat(xs[support, None], heights.size, axis=1)
    py = np.repeat(ys[support, None], heights.size, axis=1)
    pz = np.broadcast_to(heights[None, :], px.shape)

    r = np.zeros((element_y.size, grid.n_pix))
    c = np.ones((element_y.size, grid.n_pix))

    def _row(index: int) -> None:
        face_y = float(element_y[index])
        fractions = _face_fractions(px, py, pz, face_x, face_y, face_width, face_height)
        weights = _inverse_cosines(px, py, pz, face_x, face_y)
        total = fractions.sum(axis=1)
        r[index, support] = total / heights.size
        c[index, support] = (fractions * weights).sum(axis=1) / total

    ordered_map(_row, range(element_y.size), workers)
    logger.debug("Response tables: %d of %d pixels computed", support.size, grid.n_pix)
    return ResponseTables(r=r, c=c)


def build_response_tables(
    grid: GridSpec,
    array: DetectorArray,
    workers: Optional[int] = None,
    support_radius: Optional[float] = None,
) -> ResponseTables:
    """
    Builds the N x N_pix response and correction tables of a detector array.

    Args:
        grid (GridSpec): Investigation domain.
        array (DetectorArray): Detector geometry.
        workers (Optional[int]): Pool size; defaults to PGET_WORKERS.
        support_radius (Optional[float]): Skip pixels farther than this plus one
            pixel from the rotation axis; every pixel is computed when omitted.

    Returns:
        ResponseTables: r in (0, 1) and c >= 1 on the computed pixels,
        r = 0 and c = 1 elsewhere.

    Raises:
        GeometryError: If the detector plane intersects the grid.
    """
    logger.info(
        "Building response tables: %d detectors x %d pixels x %d voxels",
        array.n_detectors, grid.n_pix, grid.n_vox,
    )
    return element_tables(
        grid,
        array.standoff_radius,
        array.element_centers(),
        array.face_width,
        array.face_height,
        workers,
        support_radius,
    )
