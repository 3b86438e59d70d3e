"""
Array Containers Module.

Pydantic models wrapping the NumPy arrays that flow between the services:
material maps, response tables, sinograms, snapshot databases, POD bases,
coefficient matrices, reconstructions and error reports. Validation runs
once at construction; the arrays are never modified afterwards.
"""

from typing import Dict, List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from app.models.schemas import GridSpec, MethodAggregate, TrialResult

CoefficientSource = Literal[
    "sampled-projection",
    "physics-aware",
    "interpolated-linear",
    "interpolated-rbf",
    "ground-truth",
]

_NORMALIZED_TOL = 1e-12


def _as_float_array(value) -> np.ndarray:
    return np.asarray(value, dtype=float)


class _ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class MaterialMap(_ArrayModel):
    """
    Rasterized emission (lam) and attenuation (mu) of one rotation angle,
    piecewise constant over the pixels of `grid`.
    """
    grid: GridSpec
    lam: np.ndarray
    mu: np.ndarray
    angle: float

    @field_validator("lam", "mu", mode="before")
    @classmethod
    def _coerce(cls, value):
        return _as_float_array(value).ravel()

    @model_validator(mode="after")
    def _check_lengths(self) -> "MaterialMap":
        n_pix = self.grid.n_pix
        if self.lam.size != n_pix or self.mu.size != n_pix:
            raise ValueError(
                f"material arrays must have {n_pix} entries, got {self.lam.size} and {self.mu.size}"
            )
        return self

    def mu_image(self) -> np.ndarray:
        """Attenuation as an (n_side, n_side) array indexed [row, col]."""
        return self.mu.reshape(self.grid.n_side, self.grid.n_side)

    def lam_image(self) -> np.ndarray:
        """Emission as an (n_side, n_side) array indexed [row, col]."""
        return self.lam.reshape(self.grid.n_side, self.grid.n_side)


class ResponseTables(_ArrayModel):
    """Angle-independent detector responses r and attenuation corrections c (N x N_pix)."""
    r: np.ndarray
    c: np.ndarray

    @model_validator(mode="after")
    def _check_shapes(self) -> "ResponseTables":
        if self.r.ndim != 2 or self.r.shape != self.c.shape:
            raise ValueError(f"r and c must be equal 2-D shapes, got {self.r.shape} and {self.c.shape}")
        return self

    @property
    def n_detectors(self) -> int:
        return self.r.shape[0]

    @property
    def n_pix(self) -> int:
        return self.r.shape[1]


class Sinogram(_ArrayModel):
    """
    Detector rows versus views. Column m was recorded at `angles[m]` degrees.
    """
    values: np.ndarray
    angles: np.ndarray
    normalized: bool = False

    @field_validator("values", mode="before")
    @classmethod
    def _coerce_values(cls, value):
        array = _as_float_array(value)
        if array.ndim != 2:
            raise ValueError(f"sinogram values must be 2-D, got shape {array.shape}")
        return array

    @field_validator("angles", mode="before")
    @classmethod
    def _coerce_angles(cls, value):
        return _as_float_array(value).ravel()

    @model_validator(mode="after")
    def _check_consistency(self) -> "Sinogram":
        if self.values.shape[1] != self.angles.size:
            raise ValueError(
                f"{self.values.shape[1]} columns but {self.angles.size} angles"
            )
        if self.angles.size and (self.angles.min() < 0.0 or self.angles.max() >= 360.0):
            raise ValueError("angles must lie in [0, 360)")
        if np.any(np.diff(self.angles) <= 0.0):
            raise ValueError("angles must be strictly increasing")
        if self.normalized and self.values.size > 1:
            low, high = float(self.values.min()), float(self.values.max())
            if abs(low) > _NORMALIZED_TOL or abs(high - 1.0) > _NORMALIZED_TOL:
                raise ValueError(f"normalized sinogram spans [{low}, {high}], expected [0, 1]")
        return self

    @property
    def n_detectors(self) -> int:
        return self.values.shape[0]

    @property
    def n_views(self) -> int:
        return self.values.shape[1]

    @property
    def is_degenerate(self) -> bool:
        """A single row or a single view cannot be reconstructed."""
        return self.n_detectors < 2 or self.n_views < 2

    def column_indices(self, angles: np.ndarray) -> np.ndarray:
        """Indices of the columns recorded at `angles`; raises KeyError for unknown angles."""
        lookup = {float(a): m for m, a in enumerate(self.angles)}
        try:
            return np.array([lookup[float(a)] for a in np.asarray(angles).ravel()], dtype=int)
        except KeyError as exc:
            raise KeyError(f"angle {exc.args[0]} not present in sinogram") from exc


class SnapshotDatabase(_ArrayModel):
    """Sampled ground-truth views (N x N_s) and the angles they were taken at."""
    matrix: np.ndarray
    sampled_angles: np.ndarray
    indices: np.ndarray

    @model_validator(mode="after")
    def _check_columns(self) -> "SnapshotDatabase":
        n_s = self.sampled_angles.size
        if self.matrix.ndim != 2 or self.matrix.shape[1] != n_s or self.indices.size != n_s:
            raise ValueError("database columns, angles and indices disagree")
        if np.unique(self.sampled_angles).size != n_s:
            raise ValueError("sampled angles must be distinct")
        return self

    @property
    def n_s(self) -> int:
        return self.sampled_angles.size


class PodBasis(_ArrayModel):
    """
    Leading k left singular vectors of a snapshot database with the full
    singular-value spectrum kept for variance reporting.
    """
    modes: np.ndarray
    singular_values: np.ndarray
    normalized_spectrum: np.ndarray
    k: int

    @model_validator(mode="after")
    def _check_modes(self) -> "PodBasis":
        if self.modes.ndim != 2 or self.modes.shape[1] != self.k:
            raise ValueError(f"modes shape {self.modes.shape} does not hold k={self.k} columns")
        return self

    @property
    def cumulative_variance(self) -> np.ndarray:
        """Information variance after 1, 2, ... modes; the last entry is 1."""
        cumulative = np.clip(np.cumsum(self.normalized_spectrum), 0.0, 1.0)
        if cumulative.size:
            cumulative[-1] = 1.0
        return cumulative


class CoefficientMatrix(_ArrayModel):
    """POD coefficients (k x N_views); row i pairs with mode i, column m with angles[m]."""
    values: np.ndarray
    source: CoefficientSource
    angles: np.ndarray

    @model_validator(mode="after")
    def _check_columns(self) -> "CoefficientMatrix":
        if self.values.ndim != 2 or self.values.shape[1] != self.angles.size:
            raise ValueError("coefficient columns and angles disagree")
        return self


class ReconImage(_ArrayModel):
    """Square FBP reconstruction; pixel_size in mm."""
    pixels: np.ndarray
    pixel_size: float = 1.0

    @model_validator(mode="after")
    def _check_image(self) -> "ReconImage":
        if self.pixels.ndim != 2 or self.pixels.shape[0] != self.pixels.shape[1]:
            raise ValueError(f"reconstruction must be square, got {self.pixels.shape}")
        if not np.all(np.isfinite(self.pixels)):
            raise ValueError("reconstruction contains non-finite values")
        return self


class ErrorReport(_ArrayModel):
    """
    Relative-error map restricted to `mask`; entries outside the mask are NaN.
    `curve` holds (threshold, pixel fraction) pairs.
    """
    error_map: np.ndarray
    mask: np.ndarray
    curve: List[Tuple[float, float]]

    @property
    def masked_errors(self) -> np.ndarray:
        return self.error_map[self.mask]


class Baseline(_ArrayModel):
    """
    Trial-independent inputs of an experiment: the normalized ground truth,
    the normalized Real-Time sinogram over the same views, the reference
    reconstruction and the Real-Time error report.
    """
    truth: Sinogram
    realtime: Sinogram
    truth_image: ReconImage
    realtime_report: ErrorReport


class ComparisonOutcome(_ArrayModel):
    """Trial results, per-method aggregates and median error maps keyed by n_s then method."""
    trials: List[TrialResult]
    aggregates: List[MethodAggregate]
    median_maps: Dict[int, Dict[str, ErrorReport]]
