"""
Ray Traversal Module.

Exact optical depth of a straight segment through the piecewise-constant
attenuation grid. The segment is clipped to the grid box, then walked cell by
cell (Amanatides-Woo traversal); every crossed pixel contributes
chord_length * mu. Parts of the segment outside the grid contribute nothing.

The scalar kernels are compiled with numba and release the GIL. The flux
kernel is compiled with parallel loops over the detectors; its launches are
serialized by the caller (see `app.services.forward.model`).
"""

import math
from typing import Tuple

import numpy as np
from numba import njit, prange

from app.models.arrays import MaterialMap
from app.models.schemas import DetectorArray
from app.utility.errors import ConfigurationError


@njit(cache=True, nogil=True)
def _clip(start, delta, low, high, t0, t1):
    if delta == 0.0:
        if start < low or start >= high:
            return 1.0, 0.0
        return t0, t1
    ta = (low - start) / delta
    tb = (high - start) / delta
    if ta > tb:
        ta, tb = tb, ta
    return max(t0, ta), min(t1, tb)


@njit(cache=True, nogil=True)
def _entry_cell(coord, direction, origin, step, n):
    scaled = (coord - origin) / step
    cell = int(math.floor(scaled))
    # entering through a cell boundary while moving backwards
    if direction < 0.0 and scaled == cell:
        cell -= 1
    return min(max(cell, 0), n - 1)


@njit(cache=True, nogil=True)
def trace_depth(mu_img, origin, step, sx, sy, ex, ey):
    """Optical depth of the segment (sx, sy) -> (ex, ey); lengths in mm, mu in 1/mm."""
    n = mu_img.shape[0]
    dx = ex - sx
    dy = ey - sy
    length = math.sqrt(dx * dx + dy * dy)
    if length == 0.0:
        return 0.0

    high = origin + n * step
    t0, t1 = _clip(sx, dx, origin, high, 0.0, 1.0)
    t0, t1 = _clip(sy, dy, origin, high, t0, t1)
    if t0 >= t1:
        return 0.0

    ux = dx / length
    uy = dy / length
    a = t0 * length
    a_end = t1 * length

    col = _entry_cell(sx + ux * a, ux, origin, step, n)
    row = _entry_cell(sy + uy * a, uy, origin, step, n)

    inf = np.inf
    if ux > 0.0:
        step_col = 1
        next_x = (origin + (col + 1) * step - sx) / ux
        delta_x = step / ux
    elif ux < 0.0:
        step_col = -1
        next_x = (origin + col * step - sx) / ux
        delta_x = -step / ux
    else:
        step_col = 0
        next_x = inf
        delta_x = inf

    if uy > 0.0:
        step_row = 1
        next_y = (origin + (row + 1) * step - sy) / uy
        delta_y = step / uy
    elif uy < 0.0:
        step_row = -1
        next_y = (origin + row * step - sy) / uy
        delta_y = -step / uy
    else:
        step_row = 0
        next_y = inf
        delta_y = inf

    depth = 0.0
    while True:
        boundary = min(next_x, next_y, a_end)
        if boundary > a:
            depth += (boundary - a) * mu_img[row, col]
        if boundary >= a_end:
            break
        a = boundary
        if next_x < next_y:
            col += step_col
            next_x += delta_x
        else:
            row += step_row
            next_y += delta_y
        if col < 0 or col >= n or row < 0 or row >= n:
            break
    return depth


@njit(cache=True, nogil=True)
def clipped_length(low, high, sx, sy, ex, ey):
    """Length of the segment (sx, sy) -> (ex, ey) inside the square [low, high]^2."""
    dx = ex - sx
    dy = ey - sy
    length = math.sqrt(dx * dx + dy * dy)
    if length == 0.0:
        return 0.0
    t0, t1 = _clip(sx, dx, low, high, 0.0, 1.0)
    t0, t1 = _clip(sy, dy, low, high, t0, t1)
    if t0 >= t1:
        return 0.0
    return (t1 - t0) * length


@njit(cache=True, nogil=True, parallel=True)
def flux_kernel(
    n_side, origin, step, background, excess, excess_origin,
    emitters, emission, r, c, face_x, face_y, out,
):
    """
    out[i] = sum over emitting pixels p of r[i, p] * exp(-c[i, p] * depth) * lam_p,
    the depth being traced from the pixel center to (face_x, face_y[i]).

    The attenuation is split into a constant `background` over the whole
    grid plus `excess`, a square window of the grid starting at cell
    boundary `excess_origin`. Only the window is walked cell by cell.
    Detectors run in parallel; each one sums its pixels in index order.
    """
    high = origin + n_side * step
    for i in prange(face_y.size):
        fy = face_y[i]
        total = 0.0
        for q in range(emitters.size):
            p = emitters[q]
            row = p // n_side
            col = p - row * n_side
            px = origin + (col + 0.5) * step
            py = origin + (row + 0.5) * step
            depth = trace_depth(excess, excess_origin, step, px, py, face_x, fy)
            if background != 0.0:
                depth += background * clipped_length(origin, high, px, py, face_x, fy)
            total += r[i, p] * math.exp(-c[i, p] * depth) * emission[q]
        out[i] = total


def split_background(mu_img: np.ndarray, origin: float, step: float) -> Tuple[float, np.ndarray, float]:
    """
    Splits an attenuation image into the value of its corner pixel and the
    smallest square window holding every other value.

    Returns:
        Tuple[float, np.ndarray, float]: (background, excess window, window origin).
        The window is a single zero cell when the image is uniform.
    """
    background = float(mu_img[0, 0])
    excess = mu_img - background
    rows = np.flatnonzero(np.any(excess != 0.0, axis=1))
    if rows.size == 0:
        return background, np.zeros((1, 1)), origin
    cols = np.flatnonzero(np.any(excess != 0.0, axis=0))
    low = int(min(rows[0], cols[0]))
    high = int(max(rows[-1], cols[-1])) + 1
    window = np.ascontiguousarray(excess[low:high, low:high])
    return background, window, origin + low * step


def segment_depth(mu_map: MaterialMap, start, end) -> float:
    """
    Optical depth of an arbitrary planar segment through `mu_map`.

    Args:
        mu_map (MaterialMap): Attenuation source.
        start (Sequence[float]): (x, y) of the first endpoint in mm.
        end (Sequence[float]): (x, y) of the second endpoint in mm.
    """
    grid = mu_map.grid
    mu_img = np.ascontiguousarray(mu_map.mu_image(), dtype=np.float64)
    return float(
        trace_depth(
            mu_img, grid.origin, grid.dx,
            float(start[0]), float(start[1]), float(end[0]), float(end[1]),
        )
    )


def line_integral(detector: int, pixel: int, mu_map: MaterialMap, array: DetectorArray) -> float:
    """
    Optical depth from the center of `pixel` to the face center of `detector`.

    Raises:
        ConfigurationError: For out-of-range indices.
    """
    grid = mu_map.grid
    if not 0 <= detector < array.n_detectors:
        raise ConfigurationError(f"detector {detector} outside [0, {array.n_detectors})")
    if not 0 <= pixel < grid.n_pix:
        raise ConfigurationError(f"pixel {pixel} outside [0, {grid.n_pix})")
    row, col = divmod(pixel, grid.n_side)
    start = (grid.origin + (col + 0.5) * grid.dx, grid.origin + (row + 0.5) * grid.dx)
    end = (array.standoff_radius, float(array.element_centers()[detector]))
    return segment_depth(mu_map, start, end)
