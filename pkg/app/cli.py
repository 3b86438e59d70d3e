"""
Command-Line Interface Module.

Entry point `pget-rom` with one subcommand per pipeline stage:

    forward   Real-Time Model sinogram
    truth     synthesize (or validate a measured) ground truth
    papod     PA-POD reconstruction of the full sinogram
    podi      PODI baseline (linear or rbf)
    fbp       filtered backprojection of a sinogram artifact
    metrics   error map and pixel fraction of two reconstructions
    compare   method comparison over random view sets
    converge  PA-POD convergence sweep
    spectrum  singular-value spectrum of the ground truth

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numerical failure.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import ValidationError

from app.models.arrays import ReconImage, Sinogram
from app.models.schemas import ExperimentConfig
from app.services.bench import (
    choose_k,
    load_ground_truth,
    prepare_baseline,
    realtime_sinogram,
    run_comparison,
    run_convergence,
    run_spectrum,
    save_comparison,
    save_convergence,
    save_spectrum,
    view_angles,
)
from app.services.bench.results import write_summary
from app.services.forward import normalize_sinogram
from app.services.recon import error_map, fbp, pixel_fraction
from app.services.rom import (
    build_basis,
    coefficient_report,
    linear_data_interpolation,
    papod_coefficients,
    podi_coefficients,
    reconstruct,
    sample_views,
)
from app.services.storage import export_csv, export_image, import_csv_sinogram, load, save
from app.utility.config import OUTPUT_BASE_DIR, PGET_DEFAULT_SEED, PGET_LOG_LEVEL
from app.utility.errors import ArtifactIOError, ConfigurationError, NumericalError

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


# ------------------------------------------------------------------
# CONFIGURATION AND ARTIFACT HELPERS
# ------------------------------------------------------------------

def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Reads the JSON configuration (if any) and applies the command-line overrides."""
    data = {"seed": PGET_DEFAULT_SEED}
    if args.config:
        path = Path(args.config)
        try:
            loaded = json.loads(path.read_text(encoding="utf-8"))
        except OSError as e:
            raise ArtifactIOError(f"cannot read configuration {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path} is not valid JSON: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigurationError(f"{path} must hold a JSON object, got {type(loaded).__name__}")
        data.update(loaded)
    if args.seed is not None:
        data["seed"] = args.seed
    if args.views is not None:
        data["n_s_values"] = [args.views]
    if args.modes is not None:
        data["k_policy"] = "fixed"
        data["k_fixed"] = args.modes
    return ExperimentConfig.model_validate(data)


def read_sinogram(path: str, config: ExperimentConfig) -> Sinogram:
    """A sinogram from a CSV table or a saved artifact."""
    if Path(path).suffix.lower() == ".csv":
        return import_csv_sinogram(path, config.csv_delimiter, config.csv_header_rows)
    artifact = load(path)
    if not isinstance(artifact, Sinogram):
        raise ConfigurationError(f"{path} does not hold a sinogram")
    return artifact


def read_image(path: str) -> ReconImage:
    """A reconstruction artifact, or the FBP of a sinogram artifact."""
    artifact = load(path)
    if isinstance(artifact, Sinogram):
        return fbp(artifact)
    if not isinstance(artifact, ReconImage):
        raise ConfigurationError(f"{path} holds neither an image nor a sinogram")
    return artifact


def write_artifact(artifact, base: Path, fmt: str, provenance: str = "") -> Path:
    """Writes an artifact in the requested format and returns the main file."""
    if fmt == "csv":
        return export_csv(artifact, base.with_name(base.name + ".csv"))
    if fmt == "png":
        values = artifact.values if isinstance(artifact, Sinogram) else artifact
        return export_image(values, base.with_name(base.name + ".png"), fmt="png")
    payload, _ = save(artifact, base, provenance=provenance)
    return payload


def read_truth(args: argparse.Namespace, config: ExperimentConfig) -> Sinogram:
    """The --truth sinogram normalized to [0, 1], or the configured ground truth."""
    if not args.truth:
        return load_ground_truth(config)
    truth = read_sinogram(args.truth, config)
    return truth if truth.normalized else normalize_sinogram(truth)


def _truth_and_realtime(args: argparse.Namespace, config: ExperimentConfig):
    truth = read_truth(args, config)
    if not getattr(args, "realtime", None):
        return truth, realtime_sinogram(config, truth.angles)
    realtime = read_sinogram(args.realtime, config)
    return truth, realtime if realtime.normalized else normalize_sinogram(realtime)


def _out_dir(args: argparse.Namespace) -> Path:
    root = Path(args.out_dir) if args.out_dir else Path(OUTPUT_BASE_DIR) / args.command
    root.mkdir(parents=True, exist_ok=True)
    return root


# ------------------------------------------------------------------
# SUBCOMMANDS
# ------------------------------------------------------------------

def cmd_forward(args: argparse.Namespace, config: ExperimentConfig) -> int:
    n_views = args.views or config.n_views
    sinogram = realtime_sinogram(config, view_angles(n_views))
    path = write_artifact(sinogram, _out_dir(args) / "realtime", args.format, "Real-Time Model")
    print(path)
    return EXIT_OK


def cmd_truth(args: argparse.Namespace, config: ExperimentConfig) -> int:
    truth = load_ground_truth(config)
    provenance = f"{config.ground_truth_source} ground truth, seed={config.seed}"
    print(write_artifact(truth, _out_dir(args) / "truth", args.format, provenance))
    return EXIT_OK


def _sample(truth: Sinogram, config: ExperimentConfig):
    db = sample_views(truth, config.n_s_values[0], config.seed)
    return db, build_basis(db, choose_k(config, db))


def cmd_papod(args: argparse.Namespace, config: ExperimentConfig) -> int:
    truth, realtime = _truth_and_realtime(args, config)
    db, basis = _sample(truth, config)
    coeffs = papod_coefficients(basis, realtime, db)
    root = _out_dir(args)
    print(write_artifact(reconstruct(basis, coeffs), root / "papod", args.format, f"seed={config.seed}"))
    save(basis, root / "basis", provenance=f"n_s={db.n_s}, seed={config.seed}")
    save(coeffs, root / "coefficients", provenance="physics-aware")
    report = coefficient_report(basis, truth, db, realtime, rows=min(3, basis.k))
    write_summary(report.model_dump(), root / "coefficient_report.json")
    return EXIT_OK


def cmd_podi(args: argparse.Namespace, config: ExperimentConfig) -> int:
    truth = read_truth(args, config)
    db, basis = _sample(truth, config)
    if args.scheme == "data-linear":
        estimate = linear_data_interpolation(db, truth.angles)
    else:
        estimate = reconstruct(basis, podi_coefficients(basis, db, truth.angles, args.scheme))
    print(write_artifact(estimate, _out_dir(args) / f"podi_{args.scheme}", args.format, f"seed={config.seed}"))
    return EXIT_OK


def cmd_fbp(args: argparse.Namespace, config: ExperimentConfig) -> int:
    sinogram = read_sinogram(args.input, config)
    image = fbp(sinogram, pixel_size=config.detector.pitch, workers=config.workers)
    print(write_artifact(image, _out_dir(args) / f"{Path(args.input).stem}_fbp", args.format))
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace, config: ExperimentConfig) -> int:
    report = error_map(read_image(args.approx), read_image(args.truth))
    fraction = pixel_fraction(report, config.threshold)
    write_artifact(report, _out_dir(args) / "error_map", args.format)
    print(json.dumps({"threshold": config.threshold, "pixel_fraction": fraction}))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, config: ExperimentConfig) -> int:
    truth, realtime = _truth_and_realtime(args, config)
    outcome = run_comparison(config, prepare_baseline(config, truth, realtime))
    written = save_comparison(outcome, _out_dir(args), config.threshold, fmt=args.format)
    print(written["summary"])
    return EXIT_OK


def cmd_converge(args: argparse.Namespace, config: ExperimentConfig) -> int:
    truth, realtime = _truth_and_realtime(args, config)
    outcome = run_convergence(config, prepare_baseline(config, truth, realtime))
    print(save_convergence(outcome, _out_dir(args))["summary"])
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace, config: ExperimentConfig) -> int:
    truth = read_truth(args, config)
    report = run_spectrum(truth)
    save_spectrum(report, _out_dir(args))
    print(json.dumps(report.modes_for))
    return EXIT_OK


COMMANDS = {
    "forward": cmd_forward,
    "truth": cmd_truth,
    "papod": cmd_papod,
    "podi": cmd_podi,
    "fbp": cmd_fbp,
    "metrics": cmd_metrics,
    "compare": cmd_compare,
    "converge": cmd_converge,
    "spectrum": cmd_spectrum,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="experiment configuration (JSON)")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument(
        "--views", type=int,
        help="sampled views N_s (forward: total views of the sinogram)",
    )
    common.add_argument("--modes", type=int, help="number of POD modes (fixed k policy)")
    common.add_argument("--out-dir", help="output directory (default OUTPUT_BASE_DIR/<command>)")
    common.add_argument("--format", choices=("csv", "bin", "png"), default="bin")

    parser = argparse.ArgumentParser(prog="pget-rom", description="PA-POD sinogram reconstruction")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("forward", parents=[common], help="Real-Time Model sinogram")
    sub.add_parser("truth", parents=[common], help="synthesize or validate the ground truth")
    for name in ("papod", "compare", "converge"):
        command = sub.add_parser(name, parents=[common])
        command.add_argument("--truth", help="ground-truth sinogram (artifact or CSV)")
        command.add_argument("--realtime", help="Real-Time sinogram (artifact or CSV)")
    podi = sub.add_parser("podi", parents=[common], help="PODI or data interpolation baseline")
    podi.add_argument("--truth", help="ground-truth sinogram (artifact or CSV)")
    podi.add_argument("--scheme", choices=("linear", "rbf", "data-linear"), default="linear")
    fbp_cmd = sub.add_parser("fbp", parents=[common], help="filtered backprojection")
    fbp_cmd.add_argument("--input", required=True, help="sinogram (artifact or CSV)")
    metrics = sub.add_parser("metrics", parents=[common], help="error map and pixel fraction")
    metrics.add_argument("--approx", required=True, help="approximate image or sinogram artifact")
    metrics.add_argument("--truth", required=True, help="reference image or sinogram artifact")
    spectrum_cmd = sub.add_parser("spectrum", parents=[common], help="singular-value spectrum")
    spectrum_cmd.add_argument("--truth", help="ground-truth sinogram (artifact or CSV)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Runs one subcommand and returns its exit code."""
    logging.basicConfig(level=PGET_LOG_LEVEL, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        return COMMANDS[args.command](args, config)
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except np.linalg.LinAlgError as e:
        logger.error("Numerical failure: %s", e)
        return EXIT_NUMERICAL
    except (ValidationError, ValueError) as e:
        logger.error("Configuration error: %s", e)
        return EXIT_CONFIG
    except (NumericalError, RuntimeError) as e:
        logger.error("Numerical failure: %s", e)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
