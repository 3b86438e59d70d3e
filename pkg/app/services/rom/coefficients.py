"""
Coefficient Estimation Module.

Projection of sinograms onto a POD space and the physics-aware estimate of
the coefficients at every view:

    C~ = U^T R                 (raw projection of the Real-Time Model)
    a_i = argmin_a || a * C~_i(sampled) - C_i ||^2,   C = U^T S^
    C~_i <- a_i * C~_i

The row scaling fits each raw row to the projections of the sampled ground
truth; a row whose sampled entries are all zero keeps a_i = 1.
"""

import logging
from typing import Dict, List

import numpy as np

from app.models.arrays import CoefficientMatrix, PodBasis, Sinogram, SnapshotDatabase
from app.models.schemas import CoefficientReport
from app.services.rom.interpolation import podi_coefficients
from app.utility.errors import ConfigurationError, ShapeError

logger = logging.getLogger(__name__)


def _check_rows(basis: PodBasis, n_rows: int, what: str) -> None:
    if basis.modes.shape[0] != n_rows:
        raise ShapeError(f"{what} has {n_rows} detector rows, basis has {basis.modes.shape[0]}")


def sampled_coefficients(basis: PodBasis, db: SnapshotDatabase) -> CoefficientMatrix:
    """C = U^T S^ at the sampled angles."""
    _check_rows(basis, db.matrix.shape[0], "database")
    return CoefficientMatrix(
        values=basis.modes.T @ db.matrix,
        source="sampled-projection",
        angles=db.sampled_angles,
    )


def ground_truth_coefficients(basis: PodBasis, truth: Sinogram) -> CoefficientMatrix:
    """U^T S over every view of the ground truth: the reference coefficients."""
    _check_rows(basis, truth.n_detectors, "ground truth")
    return CoefficientMatrix(
        values=basis.modes.T @ truth.values, source="ground-truth", angles=truth.angles
    )


def row_scales(raw_sampled: np.ndarray, sampled: np.ndarray) -> np.ndarray:
    """Least-squares scale of every row of `raw_sampled` onto `sampled`."""
    numerator = np.sum(raw_sampled * sampled, axis=1)
    denominator = np.sum(raw_sampled * raw_sampled, axis=1)
    scales = np.ones_like(denominator)
    np.divide(numerator, denominator, out=scales, where=denominator != 0.0)
    return scales


def papod_coefficients(basis: PodBasis, realtime: Sinogram, db: SnapshotDatabase) -> CoefficientMatrix:
    """
    Physics-aware coefficients at every view of the Real-Time sinogram.

    Args:
        basis (PodBasis): POD space built from `db`.
        realtime (Sinogram): Real-Time Model sinogram covering the sampled angles.
        db (SnapshotDatabase): Sampled ground-truth views.

    Returns:
        CoefficientMatrix: k x N_views, source "physics-aware".

    Raises:
        ShapeError: If detector counts disagree or a sampled angle is missing from `realtime`.
    """
    _check_rows(basis, realtime.n_detectors, "Real-Time sinogram")
    _check_rows(basis, db.matrix.shape[0], "database")
    try:
        columns = realtime.column_indices(db.sampled_angles)
    except KeyError as exc:
        raise ShapeError(f"Real-Time sinogram misses a sampled view: {exc}") from exc

    raw = basis.modes.T @ realtime.values
    sampled = basis.modes.T @ db.matrix
    scales = row_scales(raw[:, columns], sampled)
    logger.debug("Row scales: min %.4g, max %.4g", float(scales.min()), float(scales.max()))
    return CoefficientMatrix(
        values=scales[:, None] * raw, source="physics-aware", angles=realtime.angles
    )


def reconstruct(basis: PodBasis, coeffs: CoefficientMatrix) -> Sinogram:
    """
    S~ = U C over the coefficient angles.

    Raises:
        ShapeError: If the coefficient rows do not match the basis size.
    """
    if coeffs.values.shape[0] != basis.k:
        raise ShapeError(f"{coeffs.values.shape[0]} coefficient rows for a basis of k={basis.k}")
    return Sinogram(values=basis.modes @ coeffs.values, angles=coeffs.angles, normalized=False)


def _rms(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.sqrt(np.mean((a - b) ** 2)))


def coefficient_report(
    basis: PodBasis,
    truth: Sinogram,
    db: SnapshotDatabase,
    realtime: Sinogram,
    rows: int = 3,
) -> CoefficientReport:
    """
    Leading coefficient rows of every estimate next to the ground-truth projection.

    The RMS deviation from U^T S is taken over every view of `truth`.
    """
    if not 1 <= rows <= basis.k:
        raise ConfigurationError(f"rows={rows} outside [1, {basis.k}]")
    if not np.array_equal(truth.angles, realtime.angles):
        raise ShapeError("ground truth and Real-Time sinogram cover different views")

    reference = ground_truth_coefficients(basis, truth)
    estimates = {
        "physics-aware": papod_coefficients(basis, realtime, db),
        "interpolated-linear": podi_coefficients(basis, db, truth.angles, "linear"),
    }
    series: Dict[str, List[List[float]]] = {
        "ground-truth": reference.values[:rows].tolist(),
        "sampled-projection": sampled_coefficients(basis, db).values[:rows].tolist(),
    }
    rms: Dict[str, float] = {}
    for name, estimate in estimates.items():
        series[name] = estimate.values[:rows].tolist()
        rms[name] = _rms(estimate.values, reference.values)

    return CoefficientReport(
        rows=rows,
        angles=truth.angles.tolist(),
        sampled_angles=db.sampled_angles.tolist(),
        series=series,
        rms=rms,
    )
