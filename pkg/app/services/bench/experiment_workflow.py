"""
Experiment Workflow Module.

Orchestrates the experiments end to end:
- ground truth loading (measured CSV) or synthesis;
- the Real-Time Model sinogram over the same views;
- random sparse-view trials evaluated for every reconstruction method;
- convergence sweeps over the number of sampled views;
- singular-value spectrum reports.

Trials are independent jobs mapped over the worker pool; their seeds are
derived from the master seed, the sampled-view count and the trial index.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.models.arrays import (
    Baseline,
    ComparisonOutcome,
    ErrorReport,
    PodBasis,
    Sinogram,
    SnapshotDatabase,
)
from app.models.schemas import (
    AssemblySpec,
    ConvergenceOutcome,
    ExperimentConfig,
    GridSpec,
    SpectrumReport,
    TrialResult,
)
from app.services.bench.results import aggregate_trials, convergence_points
from app.services.forward import full_sinogram, normalize_sinogram, synthesize_ground_truth
from app.services.geometry import load_layout
from app.services.recon import error_map, fbp, median_error_map, pixel_fraction
from app.services.rom import (
    build_basis,
    linear_data_interpolation,
    modes_for_variance,
    papod_coefficients,
    podi_coefficients,
    reconstruct,
    sample_views,
    spectrum_basis,
)
from app.services.storage import import_csv_sinogram
from app.utility.errors import ArtifactIOError, ConfigurationError
from app.utility.parallel import derive_seed, ordered_map

logger = logging.getLogger(__name__)

VARIANCE_PRESETS: Tuple[float, ...] = (0.80, 0.90, 0.95)


def resolve_assembly(config: ExperimentConfig) -> AssemblySpec:
    """The explicit assembly of the configuration, or its bundled layout."""
    return config.assembly if config.assembly is not None else load_layout(config.layout)


def view_angles(n_views: int) -> np.ndarray:
    """n_views equally spaced angles over a full turn; 0..359 for 360 views."""
    return np.arange(n_views) * (360.0 / n_views)


def load_ground_truth(config: ExperimentConfig) -> Sinogram:
    """
    Loads the measured sinogram or synthesizes one, normalized to [0, 1].

    Raises:
        ArtifactIOError: If the measured file is missing or unreadable.
        ConfigurationError: If the file does not match the detector array.
    """
    if config.ground_truth_source == "file":
        path = Path(config.ground_truth_path)
        if not path.is_file():
            raise ArtifactIOError(
                f"ground truth file {path} not found; "
                "set ground_truth_source to 'synthetic' to run without measured data"
            )
        measured = import_csv_sinogram(path, config.csv_delimiter, config.csv_header_rows)
        if measured.n_detectors != config.detector.n_detectors:
            raise ConfigurationError(
                f"{path} has {measured.n_detectors} detector rows, "
                f"the detector array has {config.detector.n_detectors}"
            )
        return normalize_sinogram(measured)

    return synthesize_ground_truth(
        resolve_assembly(config),
        config.fidelity,
        config.seed,
        array=config.detector,
        angles=view_angles(config.n_views),
        dz=config.dz,
        half_extent_z=config.half_extent_z,
        workers=config.workers,
    )


def realtime_sinogram(config: ExperimentConfig, angles: Sequence[float]) -> Sinogram:
    """Normalized Real-Time Model sinogram at `angles`."""
    spec = resolve_assembly(config)
    grid = GridSpec.enclosing(spec, config.realtime_dx, dz=config.dz, half_extent_z=config.half_extent_z)
    raw = full_sinogram(spec, grid, config.detector, angles, workers=config.workers)
    return normalize_sinogram(raw)


def prepare_baseline(
    config: ExperimentConfig,
    truth: Optional[Sinogram] = None,
    realtime: Optional[Sinogram] = None,
) -> Baseline:
    """Builds (or accepts) the trial-independent inputs of an experiment."""
    truth = truth if truth is not None else load_ground_truth(config)
    if realtime is None:
        realtime = realtime_sinogram(config, truth.angles)
    if realtime.values.shape != truth.values.shape:
        raise ConfigurationError(
            f"Real-Time sinogram {realtime.values.shape} and ground truth "
            f"{truth.values.shape} differ"
        )
    truth_image = fbp(truth, pixel_size=config.detector.pitch, workers=config.workers)
    realtime_image = fbp(realtime, pixel_size=config.detector.pitch, workers=config.workers)
    return Baseline(
        truth=truth,
        realtime=realtime,
        truth_image=truth_image,
        realtime_report=error_map(realtime_image, truth_image),
    )


def choose_k(config: ExperimentConfig, db: SnapshotDatabase) -> int:
    """Applies the k policy to one snapshot database."""
    ceiling = min(db.matrix.shape)
    if config.k_policy == "equal-to-ns":
        return min(db.n_s, ceiling)
    if config.k_policy == "fixed":
        return min(config.k_fixed, ceiling)

    return modes_for_variance(spectrum_basis(db.matrix), config.variance_target)


def method_sinogram(
    method: str, basis: PodBasis, db: SnapshotDatabase, baseline: Baseline
) -> Sinogram:
    """Full-view sinogram estimated by one method."""
    angles = baseline.truth.angles
    if method == "pa-pod":
        return reconstruct(basis, papod_coefficients(basis, baseline.realtime, db))
    if method == "realtime":
        return baseline.realtime
    if method == "podi-linear":
        return reconstruct(basis, podi_coefficients(basis, db, angles, "linear"))
    if method == "podi-rbf":
        return reconstruct(basis, podi_coefficients(basis, db, angles, "rbf"))
    if method == "data-linear":
        return linear_data_interpolation(db, angles)
    raise ConfigurationError(f"unknown method '{method}'")


def run_trial(
    config: ExperimentConfig,
    baseline: Baseline,
    n_s: int,
    trial: int,
    methods: Optional[Sequence[str]] = None,
) -> Tuple[TrialResult, Dict[str, ErrorReport]]:
    """
    One random view set: sample, build the POD space, estimate every method,
    reconstruct and score against the reference reconstruction.
    """
    methods = list(methods or config.methods)
    seed = derive_seed(config.seed, n_s, trial)
    db = sample_views(baseline.truth, n_s, seed)
    basis = build_basis(db, choose_k(config, db))

    reports: Dict[str, ErrorReport] = {}
    for method in methods:
        if method == "realtime":
            reports[method] = baseline.realtime_report
            continue
        image = fbp(
            method_sinogram(method, basis, db, baseline),
            pixel_size=baseline.truth_image.pixel_size,
            workers=1,
        )
        reports[method] = error_map(image, baseline.truth_image)

    fractions = {method: pixel_fraction(report, config.threshold) for method, report in reports.items()}
    logger.debug("Trial n_s=%d #%d (seed %d, k=%d): %s", n_s, trial, seed, basis.k, fractions)
    return TrialResult(n_s=n_s, trial=trial, seed=seed, k=basis.k, fractions=fractions), reports


def _run_trials(
    config: ExperimentConfig, baseline: Baseline, methods: Sequence[str]
) -> List[Tuple[TrialResult, Dict[str, ErrorReport]]]:
    jobs = [(n_s, trial) for n_s in config.n_s_values for trial in range(config.trials)]
    logger.info("Running %d trials over n_s=%s", len(jobs), config.n_s_values)
    outcomes = ordered_map(
        lambda job: run_trial(config, baseline, job[0], job[1], methods), jobs, config.workers
    )
    return sorted(outcomes, key=lambda outcome: (outcome[0].n_s, outcome[0].trial))


def run_comparison(config: ExperimentConfig, baseline: Optional[Baseline] = None) -> ComparisonOutcome:
    """
    Evaluates every configured method over `trials` random view sets per n_s.

    Args:
        config (ExperimentConfig): Experiment parameters.
        baseline (Optional[Baseline]): Precomputed inputs; built from `config` when omitted.

    Returns:
        ComparisonOutcome: Trials ordered by (n_s, trial), aggregates and
        per-pixel median error maps.
    """
    baseline = baseline or prepare_baseline(config)
    outcomes = _run_trials(config, baseline, config.methods)

    median_maps: Dict[int, Dict[str, ErrorReport]] = {}
    for n_s in config.n_s_values:
        group = [reports for result, reports in outcomes if result.n_s == n_s]
        median_maps[n_s] = {
            method: median_error_map([reports[method] for reports in group])
            for method in config.methods
        }

    trials = [result for result, _ in outcomes]
    logger.info("Comparison finished: %d trials, methods %s", len(trials), config.methods)
    return ComparisonOutcome(trials=trials, aggregates=aggregate_trials(trials), median_maps=median_maps)


def run_convergence(config: ExperimentConfig, baseline: Optional[Baseline] = None) -> ConvergenceOutcome:
    """
    Mean and std of the PA-POD pixel fraction for every n_s of the sweep,
    returned with the trial results they were computed from.
    """
    baseline = baseline or prepare_baseline(config)
    trials = [result for result, _ in _run_trials(config, baseline, ["pa-pod"])]
    return ConvergenceOutcome(points=convergence_points(trials, "pa-pod"), trials=trials)


def run_spectrum(ground_truth: Sinogram) -> SpectrumReport:
    """
    Singular-value spectrum of a full sinogram and the mode counts reaching
    80, 90 and 95 % information variance.

    Raises:
        NumericalError: If the sinogram is identically zero.
    """
    spectrum = spectrum_basis(ground_truth.values)
    modes_for = {f"{target:.2f}": modes_for_variance(spectrum, target) for target in VARIANCE_PRESETS}
    logger.info("Spectrum: rank %d, modes for %s", spectrum.k, modes_for)
    return SpectrumReport(
        singular_values=spectrum.singular_values.tolist(),
        normalized_spectrum=spectrum.normalized_spectrum.tolist(),
        cumulative_variance=spectrum.cumulative_variance.tolist(),
        modes_for=modes_for,
    )
