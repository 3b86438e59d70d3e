"""
Results Module.

Aggregation and persistence of experiment results: trial tables as CSV,
summaries as JSON, median error maps as artifacts and heatmaps, curves and
spectra as PNG figures next to their CSV data. Aggregates can be recomputed
from a persisted trial table without re-running any simulation.
"""

import csv
import json
import logging
import os
from pathlib import Path
from typing import Dict, List, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position
import numpy as np  # pylint: disable=wrong-import-position

from app.models.arrays import ComparisonOutcome, ErrorReport  # pylint: disable=wrong-import-position
from app.models.schemas import (  # pylint: disable=wrong-import-position
    ALL_METHODS,
    ConvergenceOutcome,
    ConvergencePoint,
    MethodAggregate,
    SpectrumReport,
    TrialResult,
)
from app.services.recon import pixel_fraction  # pylint: disable=wrong-import-position
from app.services.storage import export_csv, export_image, save  # pylint: disable=wrong-import-position
from app.utility.errors import ArtifactIOError, ArtifactParseError  # pylint: disable=wrong-import-position

logger = logging.getLogger(__name__)

_FIXED_COLUMNS = ("n_s", "trial", "seed", "k")


def _method_order(method: str) -> int:
    return ALL_METHODS.index(method) if method in ALL_METHODS else len(ALL_METHODS)


def aggregate_trials(results: Sequence[TrialResult]) -> List[MethodAggregate]:
    """Mean and (population) standard deviation per (n_s, method)."""
    groups: Dict[tuple, List[float]] = {}
    for result in results:
        for method, fraction in result.fractions.items():
            groups.setdefault((result.n_s, method), []).append(fraction)
    return [
        MethodAggregate(
            method=method,
            n_s=n_s,
            mean=float(np.mean(values)),
            std=float(np.std(values)),
            trials=len(values),
        )
        for (n_s, method), values in sorted(
            groups.items(), key=lambda item: (item[0][0], _method_order(item[0][1]), item[0][1])
        )
    ]


def convergence_points(results: Sequence[TrialResult], method: str = "pa-pod") -> List[ConvergencePoint]:
    """Aggregates of one method as a convergence curve ordered by n_s."""
    return [
        ConvergencePoint(n_s=aggregate.n_s, mean=aggregate.mean, std=aggregate.std, trials=aggregate.trials)
        for aggregate in aggregate_trials(results)
        if aggregate.method == method
    ]


def write_trial_results(results: Sequence[TrialResult], path: Union[str, os.PathLike]) -> Path:
    """One CSV row per trial: n_s, trial, seed, k, then one column per method."""
    methods = sorted({m for r in results for m in r.fractions}, key=lambda m: (_method_order(m), m))
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow([*_FIXED_COLUMNS, *methods])
            for result in results:
                writer.writerow(
                    [result.n_s, result.trial, result.seed, result.k]
                    + [repr(result.fractions[m]) if m in result.fractions else "" for m in methods]
                )
    except OSError as e:
        logger.exception("Failed to write trial table %s", target)
        raise ArtifactIOError(f"cannot write trial table at {target}: {e}") from e
    return target


def load_trial_results(path: Union[str, os.PathLike]) -> List[TrialResult]:
    """
    Reads a trial table written by `write_trial_results`.

    Raises:
        ArtifactIOError: If the file cannot be read.
        ArtifactParseError: If a row is malformed.
    """
    target = Path(path)
    try:
        with target.open("r", encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as e:
        logger.exception("Failed to read trial table %s", target)
        raise ArtifactIOError(f"cannot read trial table at {target}: {e}") from e

    if not rows or tuple(rows[0][:4]) != _FIXED_COLUMNS:
        raise ArtifactParseError(f"{target}: missing header {','.join(_FIXED_COLUMNS)}", line=1)
    methods = rows[0][4:]
    results = []
    for line_number, row in enumerate(rows[1:], start=2):
        if len(row) != len(rows[0]):
            raise ArtifactParseError(f"{target}: line {line_number} is ragged", line=line_number)
        try:
            results.append(
                TrialResult(
                    n_s=int(row[0]),
                    trial=int(row[1]),
                    seed=int(row[2]),
                    k=int(row[3]),
                    fractions={m: float(v) for m, v in zip(methods, row[4:]) if v != ""},
                )
            )
        except ValueError as e:
            raise ArtifactParseError(f"{target}: line {line_number}: {e}", line=line_number) from e
    return results


def write_summary(payload: dict, path: Union[str, os.PathLike]) -> Path:
    """Writes a JSON summary."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(payload, indent=2), encoding="utf-8")
    except OSError as e:
        logger.exception("Failed to write summary %s", target)
        raise ArtifactIOError(f"cannot write summary at {target}: {e}") from e
    return target


def _save_figure(fig, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, dpi=150, bbox_inches="tight")
    except OSError as e:
        raise ArtifactIOError(f"cannot write figure at {path}: {e}") from e
    finally:
        plt.close(fig)
    return path


def plot_convergence(points: Sequence[ConvergencePoint], path: Union[str, os.PathLike]) -> Path:
    """Mean pixel fraction versus n_s with one-std error bars."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(
        [p.n_s for p in points], [p.mean for p in points], yerr=[p.std for p in points],
        marker="o", capsize=3,
    )
    ax.set_xlabel("sampled views")
    ax.set_ylabel("pixel fraction")
    ax.grid(alpha=0.3)
    return _save_figure(fig, Path(path))


def plot_trial_histogram(
    results: Sequence[TrialResult], path: Union[str, os.PathLike], method: str = "pa-pod"
) -> Path:
    """Histogram of the per-trial pixel fractions of one method, one series per n_s."""
    groups: Dict[int, List[float]] = {}
    for result in results:
        if method in result.fractions:
            groups.setdefault(result.n_s, []).append(result.fractions[method])
    fig, ax = plt.subplots(figsize=(6, 4))
    for n_s, fractions in sorted(groups.items()):
        ax.hist(fractions, bins=20, range=(0.0, 1.0), alpha=0.6, label=f"n_s={n_s}")
    ax.set_xlabel("pixel fraction")
    ax.set_ylabel("trials")
    if groups:
        ax.legend()
    return _save_figure(fig, Path(path))


def plot_spectrum(report: SpectrumReport, path: Union[str, os.PathLike]) -> Path:
    """Normalized singular values (log scale) and cumulative information variance."""
    modes = np.arange(1, len(report.normalized_spectrum) + 1)
    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    spectrum = np.asarray(report.normalized_spectrum)
    positive = spectrum > 0
    left.semilogy(modes[positive], spectrum[positive], marker=".")
    left.set_xlabel("mode")
    left.set_ylabel("normalized singular value")
    right.plot(modes, report.cumulative_variance)
    for target, count in report.modes_for.items():
        right.axhline(float(target), color="grey", linewidth=0.5)
        right.axvline(count, color="grey", linewidth=0.5)
    right.set_xlabel("modes")
    right.set_ylabel("information variance")
    return _save_figure(fig, Path(path))


def plot_fraction_curves(reports: Dict[str, ErrorReport], path: Union[str, os.PathLike]) -> Path:
    """Pixel fraction versus threshold, one line per method."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for method, report in reports.items():
        thresholds, fractions = zip(*report.curve)
        ax.plot(thresholds, fractions, label=method)
    ax.set_xlabel("relative error threshold")
    ax.set_ylabel("pixel fraction")
    ax.legend()
    ax.grid(alpha=0.3)
    return _save_figure(fig, Path(path))


def write_curve_csv(header: Sequence[str], rows: Sequence[Sequence[float]], path: Union[str, os.PathLike]) -> Path:
    """Plain CSV table backing a figure."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with target.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise ArtifactIOError(f"cannot write CSV at {target}: {e}") from e
    return target


def median_map_fractions(outcome: ComparisonOutcome, threshold: float) -> Dict[int, Dict[str, float]]:
    """Pixel fraction of every median error map at `threshold`."""
    return {
        n_s: {method: pixel_fraction(report, threshold) for method, report in reports.items()}
        for n_s, reports in outcome.median_maps.items()
    }


def save_comparison(
    outcome: ComparisonOutcome,
    out_dir: Union[str, os.PathLike],
    threshold: float,
    fmt: str = "png",
) -> Dict[str, Path]:
    """
    Persists a comparison: trial table, JSON summary and the median error maps
    as artifacts. With fmt "png" heatmaps and fraction curves are drawn; with
    fmt "csv" the maps are also exported as CSV.
    """
    root = Path(out_dir)
    written = {"trials": write_trial_results(outcome.trials, root / "trials.csv")}
    for n_s, reports in outcome.median_maps.items():
        for method, report in reports.items():
            base = root / f"median_{method}_ns{n_s}"
            written[base.name], _ = save(report, base, provenance=f"median error map, method={method}, n_s={n_s}")
            if fmt == "png":
                export_image(report, base.with_name(base.name + ".png"), fmt="png")
            elif fmt == "csv":
                export_csv(report, base.with_name(base.name + ".csv"))
        if fmt == "png":
            written[f"curves_ns{n_s}"] = plot_fraction_curves(reports, root / f"fraction_curves_ns{n_s}.png")

    summary = {
        "threshold": threshold,
        "aggregates": [a.model_dump() for a in outcome.aggregates],
        "median_map_fractions": {
            str(n_s): fractions for n_s, fractions in median_map_fractions(outcome, threshold).items()
        },
    }
    written["summary"] = write_summary(summary, root / "summary.json")
    logger.info("Comparison written to %s", root)
    return written


def save_convergence(outcome: ConvergenceOutcome, out_dir: Union[str, os.PathLike]) -> Dict[str, Path]:
    """
    Convergence table (CSV), per-trial table (CSV), summary (JSON), curve
    and per-trial histogram (PNG). The points can be recomputed from the
    trial table with `load_trial_results` and `convergence_points`.
    """
    root = Path(out_dir)
    points = outcome.points
    return {
        "table": write_curve_csv(
            ["n_s", "mean", "std", "trials"],
            [[p.n_s, repr(p.mean), repr(p.std), p.trials] for p in points],
            root / "convergence.csv",
        ),
        "trials": write_trial_results(outcome.trials, root / "trials.csv"),
        "summary": write_summary({"points": [p.model_dump() for p in points]}, root / "convergence.json"),
        "figure": plot_convergence(points, root / "convergence.png"),
        "histogram": plot_trial_histogram(outcome.trials, root / "convergence_hist.png"),
    }


def save_spectrum(report: SpectrumReport, out_dir: Union[str, os.PathLike]) -> Dict[str, Path]:
    """Spectrum table (CSV), summary (JSON) and figure (PNG)."""
    root = Path(out_dir)
    rows = [
        [j + 1, repr(s), repr(n), repr(c)]
        for j, (s, n, c) in enumerate(
            zip(report.singular_values, report.normalized_spectrum, report.cumulative_variance)
        )
    ]
    return {
        "table": write_curve_csv(
            ["mode", "singular_value", "normalized", "cumulative_variance"], rows, root / "spectrum.csv"
        ),
        "summary": write_summary(report.model_dump(), root / "spectrum.json"),
        "figure": plot_spectrum(report, root / "spectrum.png"),
    }
