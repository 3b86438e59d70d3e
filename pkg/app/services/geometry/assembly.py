"""
Assembly Rasterization Module.

This module turns an assembly layout into the piecewise-constant emission
and attenuation maps consumed by the forward model.

The assembly rotates counter-clockwise by the view angle while the grid and
the detectors stay fixed. A pixel is classified as fuel when its center lies
inside a rotated pin disk (center membership, no area weighting).
"""

import logging
import math

import numpy as np

from app.models.arrays import MaterialMap
from app.models.schemas import AssemblySpec, GridSpec
from app.utility.errors import ConfigurationError, DomainCoverageError

logger = logging.getLogger(__name__)


def rotate_points(points: np.ndarray, angle: float) -> np.ndarray:
    """Rotates (n, 2) points counter-clockwise by `angle` degrees about the origin."""
    theta = math.radians(angle)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    rotation = np.array([[cos_t, -sin_t], [sin_t, cos_t]])
    return points @ rotation.T


def _check_angle(angle: float) -> None:
    if not 0.0 <= angle < 360.0:
        raise ConfigurationError(f"angle must lie in [0, 360), got {angle}")


def rasterize(spec: AssemblySpec, grid: GridSpec, angle: float) -> MaterialMap:
    """
    Rasterizes the assembly rotated by `angle` onto the fixed grid.

    Args:
        spec (AssemblySpec): Lattice and material constants.
        grid (GridSpec): Investigation domain.
        angle (float): Rotation angle in degrees, in [0, 360).

    Returns:
        MaterialMap: Fuel values where a pixel center lies in a pin disk,
        background values elsewhere.

    Raises:
        ConfigurationError: If the angle is out of range.
        DomainCoverageError: If a rotated pin reaches beyond the grid.
    """
    _check_angle(angle)

    n_side = grid.n_side
    half_width = n_side * grid.dx / 2.0
    radius = spec.pin_radius
    centers = rotate_points(spec.pin_centers(), angle)

    if centers.size:
        reach = np.max(np.abs(centers)) + radius
        if reach > half_width:
            raise DomainCoverageError(
                f"rotated lattice reaches {reach:.3f} mm but the grid half width is {half_width:.3f} mm"
            )

    fuel = np.zeros((n_side, n_side), dtype=bool)
    axis = grid.origin + (np.arange(n_side) + 0.5) * grid.dx

    # Only the pixels in each pin's bounding box can be inside it
    for cx, cy in centers:
        col_lo = max(0, int(math.floor((cx - radius - grid.origin) / grid.dx)))
        col_hi = min(n_side, int(math.ceil((cx + radius - grid.origin) / grid.dx)) + 1)
        row_lo = max(0, int(math.floor((cy - radius - grid.origin) / grid.dx)))
        row_hi = min(n_side, int(math.ceil((cy + radius - grid.origin) / grid.dx)) + 1)
        dx2 = (axis[col_lo:col_hi] - cx) ** 2
        dy2 = (axis[row_lo:row_hi] - cy) ** 2
        fuel[row_lo:row_hi, col_lo:col_hi] |= (dy2[:, None] + dx2[None, :]) <= radius * radius

    fuel = fuel.ravel()
    lam = np.where(fuel, spec.emission_fuel, spec.emission_background)
    mu = np.where(fuel, spec.attenuation_fuel, spec.attenuation_background)

    logger.debug("Rasterized %s at %.1f deg: %d fuel pixels", spec.name, angle, int(fuel.sum()))
    return MaterialMap(grid=grid, lam=lam, mu=mu, angle=angle)


def voxel_centers(grid: GridSpec, pixel: int) -> np.ndarray:
    """
    Returns the barycenters of the voxels stacked above and below a pixel.

    Args:
        grid (GridSpec): Investigation domain.
        pixel (int): Flat pixel index (row * n_side + col).

    Returns:
        np.ndarray: (N_vox, 3) points sharing the pixel's (x, y) center.

    Raises:
        ConfigurationError: If the pixel index is out of range.
    """
    if not 0 <= pixel < grid.n_pix:
        raise ConfigurationError(f"pixel {pixel} outside [0, {grid.n_pix})")
    row, col = divmod(int(pixel), grid.n_side)
    x = grid.origin + (col + 0.5) * grid.dx
    y = grid.origin + (row + 0.5) * grid.dy
    z = grid.voxel_heights()
    return np.column_stack([np.full(z.size, x), np.full(z.size, y), z])
