"""
Schemas Module.

This module defines the Pydantic models used for configuration validation
and for API requests and responses. It includes schemas for the assembly
layout, the investigation grid, the detector array, the ground-truth
fidelity knobs, experiment configuration and experiment results.
"""

import math
from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

Method = Literal["pa-pod", "realtime", "podi-linear", "podi-rbf", "data-linear"]
ALL_METHODS: Tuple[str, ...] = ("pa-pod", "realtime", "podi-linear", "podi-rbf", "data-linear")


# ------------------------------------------------------------------
# GEOMETRY MODELS
# ------------------------------------------------------------------

class AssemblySpec(BaseModel):
    """
    Pin lattice of a fuel assembly with its material constants.

    Pin (row, col) sits at x = (col - (cols-1)/2) * pitch and
    y = ((rows-1)/2 - row) * pitch, so row 0 is the top of the lattice.

    Attributes:
        name (str): Layout identifier.
        lattice_rows (int): Number of pin rows.
        lattice_cols (int): Number of pin columns.
        pin_pitch (float): Center-to-center pin distance in mm.
        pin_radius (float): Pin radius in mm.
        missing_pins (List[Tuple[int, int]]): Removed (row, col) positions.
        emission_fuel (float): Emission density inside pins (arbitrary units).
        emission_background (float): Emission density of the moderator.
        attenuation_fuel (float): Linear attenuation of fuel in 1/mm.
        attenuation_background (float): Linear attenuation of water in 1/mm.
    """
    name: str = "custom"
    lattice_rows: int = Field(10, ge=1)
    lattice_cols: int = Field(10, ge=1)
    pin_pitch: float = Field(12.6, gt=0)
    pin_radius: float = Field(4.75, gt=0)
    missing_pins: List[Tuple[int, int]] = Field(default_factory=list)
    emission_fuel: float = Field(100.0, ge=0)
    emission_background: float = Field(0.0, ge=0)
    attenuation_fuel: float = Field(0.1356, ge=0)
    attenuation_background: float = Field(0.0085, ge=0)

    @field_validator("missing_pins")
    @classmethod
    def _dedupe_missing(cls, value: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        return sorted({(int(r), int(c)) for r, c in value})

    @model_validator(mode="after")
    def _check_lattice(self) -> "AssemblySpec":
        if self.pin_pitch <= 2 * self.pin_radius:
            raise ValueError(
                f"pin_pitch ({self.pin_pitch}) must exceed twice pin_radius ({self.pin_radius})"
            )
        for row, col in self.missing_pins:
            if not (0 <= row < self.lattice_rows and 0 <= col < self.lattice_cols):
                raise ValueError(f"missing pin ({row}, {col}) lies outside the lattice")
        return self

    def pin_centers(self) -> np.ndarray:
        """Returns the (n_pins, 2) array of present pin centers at angle 0."""
        missing = set(self.missing_pins)
        centers = [
            (
                (col - (self.lattice_cols - 1) / 2.0) * self.pin_pitch,
                ((self.lattice_rows - 1) / 2.0 - row) * self.pin_pitch,
            )
            for row in range(self.lattice_rows)
            for col in range(self.lattice_cols)
            if (row, col) not in missing
        ]
        return np.asarray(centers, dtype=float).reshape(-1, 2)

    def circumscribed_radius(self) -> float:
        """Radius of the smallest origin-centered circle holding every lattice pin."""
        half_x = (self.lattice_cols - 1) / 2.0 * self.pin_pitch
        half_y = (self.lattice_rows - 1) / 2.0 * self.pin_pitch
        return math.hypot(half_x, half_y) + self.pin_radius


def _ceil_count(length: float, step: float) -> int:
    # round first so 100/10 does not become 11 through representation error
    return int(math.ceil(round(length / step, 9)))


class GridSpec(BaseModel):
    """
    Discretized investigation domain: square pixels in the plane, voxel
    columns along z.

    Attributes:
        dx (float): Pixel size along x in mm.
        dy (float): Pixel size along y in mm (must equal dx).
        dz (float): Voxel height in mm.
        half_extent_xy (float): Half width of the square domain in mm.
        half_extent_z (float): Half height of the voxel column in mm.
    """
    dx: float = Field(0.5, gt=0)
    dy: float = Field(0.5, gt=0)
    dz: float = Field(10.0, gt=0)
    half_extent_xy: float = Field(106.4, gt=0)
    half_extent_z: float = Field(50.0, gt=0)

    @model_validator(mode="after")
    def _check_square(self) -> "GridSpec":
        if not math.isclose(self.dx, self.dy, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError(f"pixels must be square, got dx={self.dx}, dy={self.dy}")
        return self

    @classmethod
    def enclosing(
        cls,
        spec: AssemblySpec,
        dx: float,
        dz: float = 10.0,
        half_extent_z: float = 50.0,
    ) -> "GridSpec":
        """Default grid: the rotated lattice plus one pin pitch of margin."""
        half = spec.circumscribed_radius() + spec.pin_pitch
        return cls(dx=dx, dy=dx, dz=dz, half_extent_xy=half, half_extent_z=half_extent_z)

    @property
    def n_side(self) -> int:
        return _ceil_count(2.0 * self.half_extent_xy, self.dx)

    @property
    def n_pix(self) -> int:
        return self.n_side * self.n_side

    @property
    def n_vox(self) -> int:
        return max(1, _ceil_count(2.0 * self.half_extent_z, self.dz))

    @property
    def origin(self) -> float:
        """Coordinate of the lower/left grid edge (the grid is centered on 0)."""
        return -self.n_side * self.dx / 2.0

    def pixel_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        Returns the flattened x and y center coordinates of every pixel.

        Pixel p = row * n_side + col, with col along +x and row along +y.
        """
        axis = self.origin + (np.arange(self.n_side) + 0.5) * self.dx
        ys, xs = np.meshgrid(axis, axis, indexing="ij")
        return xs.ravel(), ys.ravel()

    def voxel_heights(self) -> np.ndarray:
        """Mid-heights of the voxels of one pixel column, symmetric about z = 0."""
        n_vox = self.n_vox
        return -n_vox * self.dz / 2.0 + (np.arange(n_vox) + 0.5) * self.dz


class DetectorArray(BaseModel):
    """
    Merged linear detector array facing the assembly.

    Element i sits at (standoff_radius, y_i, 0) with
    y_i = (i - (n-1)/2) * pitch + head_offset; its rectangular face lies in
    the plane x = standoff_radius, face_width along y and face_height along z.

    Attributes:
        n_detectors (int): Effective measurement rows (182 for two staggered heads).
        pitch (float): Effective row spacing in mm.
        head_offset (float): Lateral shift of the array center in mm.
        face_width (float): Face extent along y in mm.
        face_height (float): Face extent along z in mm.
        standoff_radius (float): Distance from the rotation axis to the face plane in mm.
    """
    n_detectors: int = Field(182, gt=0)
    pitch: float = Field(2.0, gt=0)
    head_offset: float = 0.0
    face_width: float = Field(4.0, gt=0)
    face_height: float = Field(5.0, gt=0)
    standoff_radius: float = Field(300.0, gt=0)

    def element_centers(self) -> np.ndarray:
        """y coordinates of the detector face centers."""
        index = np.arange(self.n_detectors, dtype=float)
        return (index - (self.n_detectors - 1) / 2.0) * self.pitch + self.head_offset


class FidelityConfig(BaseModel):
    """
    Knobs of the synthetic ground truth, which must be richer than the
    Real-Time Model.

    Attributes:
        dx (float): Pixel size of the fine grid in mm.
        face_subsampling (int): Sub-elements per detector face along y.
        count_scale (float): Expected counts at normalized value 1.
        poisson_noise (bool): Draw Poisson counts when True.
        blur_rows (float): Gaussian blur sigma across detector rows; 0 disables.
    """
    dx: float = Field(0.25, gt=0)
    face_subsampling: int = Field(2, ge=1)
    count_scale: float = 1e4
    poisson_noise: bool = True
    blur_rows: float = Field(0.5, ge=0)


# ------------------------------------------------------------------
# EXPERIMENT MODELS
# ------------------------------------------------------------------

class ExperimentConfig(BaseModel):
    """
    Parameters of a comparison, convergence or spectrum experiment.

    Attributes:
        ground_truth_source (str): "file" for a measured CSV sinogram, "synthetic" otherwise.
        ground_truth_path (Optional[str]): CSV path when the source is "file".
        csv_delimiter (str): Delimiter of the measured CSV.
        csv_header_rows (int): Rows to skip at the top of the measured CSV.
        layout (str): Bundled assembly layout used when `assembly` is not given.
        assembly (Optional[AssemblySpec]): Explicit assembly, overrides `layout`.
        realtime_dx (float): Pixel size of the Real-Time Model grid in mm.
        dz (float): Voxel height in mm.
        half_extent_z (float): Half height of voxel columns in mm.
        detector (DetectorArray): Detector geometry.
        fidelity (FidelityConfig): Synthetic ground-truth settings.
        n_views (int): Number of 1-degree views (360 for a full rotation).
        n_s_values (List[int]): Sampled-view counts to evaluate.
        trials (int): Random view sets per sampled-view count.
        seed (int): Master seed; trial seeds are derived from it.
        threshold (float): Relative-error threshold of the pixel fraction.
        k_policy (str): "equal-to-ns", "fixed" or "variance-target".
        k_fixed (Optional[int]): Mode count for the "fixed" policy.
        variance_target (float): Information variance for the "variance-target" policy.
        methods (List[str]): Methods evaluated by the comparison.
        workers (Optional[int]): Pool size; None uses PGET_WORKERS.
    """
    ground_truth_source: Literal["file", "synthetic"] = "synthetic"
    ground_truth_path: Optional[str] = None
    csv_delimiter: str = ","
    csv_header_rows: int = Field(0, ge=0)
    layout: str = "pwr_10x10_3x3gap"
    assembly: Optional[AssemblySpec] = None
    realtime_dx: float = Field(0.5, gt=0)
    dz: float = Field(10.0, gt=0)
    half_extent_z: float = Field(50.0, gt=0)
    detector: DetectorArray = Field(default_factory=DetectorArray)
    fidelity: FidelityConfig = Field(default_factory=FidelityConfig)
    n_views: int = Field(360, ge=2, le=360)
    n_s_values: List[int] = Field(default_factory=lambda: list(range(30, 121, 10)))
    trials: int = Field(100, ge=1)
    seed: int = Field(42, ge=0)
    threshold: float = Field(0.10, ge=0.0, le=1.0)
    k_policy: Literal["equal-to-ns", "fixed", "variance-target"] = "equal-to-ns"
    k_fixed: Optional[int] = Field(None, ge=1)
    variance_target: float = Field(0.95, gt=0.0, le=1.0)
    methods: List[Method] = Field(default_factory=lambda: list(ALL_METHODS))
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _check_sweep(self) -> "ExperimentConfig":
        if not self.n_s_values:
            raise ValueError("n_s_values must not be empty")
        for n_s in self.n_s_values:
            if not 1 <= n_s <= self.n_views:
                raise ValueError(f"n_s={n_s} outside [1, {self.n_views}]")
        if self.k_policy == "fixed" and self.k_fixed is None:
            raise ValueError("k_policy 'fixed' requires k_fixed")
        if self.ground_truth_source == "file" and not self.ground_truth_path:
            raise ValueError("ground_truth_source 'file' requires ground_truth_path")
        return self


class TrialResult(BaseModel):
    """
    Pixel fractions of one random view set.

    Attributes:
        n_s (int): Number of sampled views.
        trial (int): Trial index within its n_s group.
        seed (int): Seed that drew the view set.
        k (int): Modes actually used.
        fractions (Dict[str, float]): Pixel fraction at the threshold, per method.
    """
    n_s: int
    trial: int
    seed: int
    k: int
    fractions: Dict[str, float]

    @field_validator("fractions")
    @classmethod
    def _check_fractions(cls, value: Dict[str, float]) -> Dict[str, float]:
        for method, fraction in value.items():
            if not 0.0 <= fraction <= 1.0:
                raise ValueError(f"fraction of {method} outside [0, 1]: {fraction}")
        return value


class MethodAggregate(BaseModel):
    """Mean and standard deviation of one method's pixel fraction."""
    method: str
    n_s: int
    mean: float
    std: float
    trials: int


class ConvergencePoint(BaseModel):
    """Pixel-fraction statistics of PA-POD at one sampled-view count."""
    n_s: int
    mean: float
    std: float
    trials: int


class ConvergenceOutcome(BaseModel):
    """Convergence curve together with the per-trial fractions it aggregates."""
    points: List[ConvergencePoint]
    trials: List[TrialResult]


class SpectrumReport(BaseModel):
    """
    Singular-value spectrum of a full sinogram.

    Attributes:
        singular_values (List[float]): Descending singular values.
        normalized_spectrum (List[float]): Singular values divided by their sum.
        cumulative_variance (List[float]): Information variance after j+1 modes.
        modes_for (Dict[str, int]): Minimal mode count reaching 0.80, 0.90, 0.95.
    """
    singular_values: List[float]
    normalized_spectrum: List[float]
    cumulative_variance: List[float]
    modes_for: Dict[str, int]


class CoefficientReport(BaseModel):
    """
    Leading coefficient rows of each estimate next to the ground-truth projection.

    Attributes:
        rows (int): Number of leading rows reported.
        angles (List[float]): Views of the full-sinogram series.
        sampled_angles (List[float]): Views of the sampled-projection series.
        series (Dict[str, List[List[float]]]): rows x views values per coefficient source.
        rms (Dict[str, float]): RMS deviation of each estimate from the ground-truth projection.
    """
    rows: int
    angles: List[float]
    sampled_angles: List[float]
    series: Dict[str, List[List[float]]]
    rms: Dict[str, float]


class ArtifactHeader(BaseModel):
    """
    JSON sidecar describing a binary payload of float64 little-endian values.

    Attributes:
        kind (str): Artifact family.
        rows (int): Matrix rows.
        cols (int): Matrix columns.
        dtype (str): Always "<f8".
        angles (Optional[List[float]]): View angles in degrees, when relevant.
        normalized (bool): Whether the values were min-max normalized.
        provenance (str): Free text: source, seed, configuration digest.
        extra (Dict[str, Any]): Kind-specific metadata (spectrum, tags, curves).
    """
    kind: Literal["sinogram", "basis", "coefficients", "image", "error-map"]
    rows: int = Field(ge=0)
    cols: int = Field(ge=0)
    dtype: Literal["<f8"] = "<f8"
    angles: Optional[List[float]] = None
    normalized: bool = False
    provenance: str = ""
    extra: Dict[str, Any] = Field(default_factory=dict)


# ------------------------------------------------------------------
# API MODELS
# ------------------------------------------------------------------

class ForwardRequest(BaseModel):
    """
    Request body of the Real-Time Model endpoint.

    Attributes:
        layout (str): Bundled layout name, ignored when `assembly` is given.
        assembly (Optional[AssemblySpec]): Explicit assembly.
        dx (float): Pixel size in mm.
        detector (DetectorArray): Detector geometry.
        n_views (int): Number of 1-degree views.
        normalize (bool): Min-max normalize the result.
    """
    layout: str = "pwr_10x10_3x3gap"
    assembly: Optional[AssemblySpec] = None
    dx: float = Field(2.5, gt=0)
    detector: DetectorArray = Field(default_factory=DetectorArray)
    n_views: int = Field(360, ge=1, le=360)
    normalize: bool = True


class SinogramResponse(BaseModel):
    """A sinogram returned inline as nested lists."""
    rows: int
    cols: int
    angles: List[float]
    normalized: bool
    values: List[List[float]]


class CompareResponse(BaseModel):
    """
    Trial-level results and per-method aggregates of a comparison.

    Attributes:
        trials (List[TrialResult]): Every trial, ordered by (n_s, trial).
        aggregates (List[MethodAggregate]): Mean and std per (n_s, method).
        median_map_fractions (Dict[int, Dict[str, float]]): Pixel fraction of the
            median error map at the threshold, per n_s and method.
    """
    trials: List[TrialResult]
    aggregates: List[MethodAggregate]
    median_map_fractions: Dict[int, Dict[str, float]]


class ConvergeResponse(BaseModel):
    """Result of a convergence sweep."""
    points: List[ConvergencePoint]
    trials: List[TrialResult] = []


class SinogramPayload(BaseModel):
    """
    A sinogram sent inline.

    Attributes:
        values (List[List[float]]): Detector rows, one value per view.
        angles (Optional[List[float]]): View angles; 0..N_views-1 when omitted.
    """
    values: List[List[float]]
    angles: Optional[List[float]] = None
