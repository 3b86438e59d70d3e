"""
Artifact Storage Module.

Every matrix artifact is persisted as two files sharing one base name:

- `<base>.bin`: rows * cols float64 values, little-endian, row-major;
- `<base>.json`: an `ArtifactHeader` sidecar (shape, angles, provenance and
  kind-specific metadata).

Loading a saved artifact returns a bit-identical object. See
docs/ARTIFACT_FORMAT.md for the byte layout.
"""

import logging
import os
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from pydantic import ValidationError

from app.models.arrays import CoefficientMatrix, ErrorReport, PodBasis, ReconImage, Sinogram
from app.models.schemas import ArtifactHeader
from app.utility.errors import ArtifactIOError, ConfigurationError

logger = logging.getLogger(__name__)

Artifact = Union[Sinogram, PodBasis, CoefficientMatrix, ReconImage, ErrorReport]

PAYLOAD_SUFFIX = ".bin"
HEADER_SUFFIX = ".json"
_DTYPE = np.dtype("<f8")


def artifact_paths(path: Union[str, os.PathLike]) -> Tuple[Path, Path]:
    """Payload and sidecar paths for a base path given with or without suffix."""
    base = Path(path)
    if base.suffix in (PAYLOAD_SUFFIX, HEADER_SUFFIX):
        base = base.with_suffix("")
    return base.with_name(base.name + PAYLOAD_SUFFIX), base.with_name(base.name + HEADER_SUFFIX)


def _describe(artifact: Artifact, provenance: str) -> Tuple[np.ndarray, ArtifactHeader]:
    if isinstance(artifact, Sinogram):
        values = artifact.values
        header = ArtifactHeader(
            kind="sinogram", rows=values.shape[0], cols=values.shape[1],
            angles=artifact.angles.tolist(), normalized=artifact.normalized,
            provenance=provenance,
        )
    elif isinstance(artifact, PodBasis):
        values = artifact.modes
        header = ArtifactHeader(
            kind="basis", rows=values.shape[0], cols=values.shape[1], provenance=provenance,
            extra={
                "k": artifact.k,
                "singular_values": artifact.singular_values.tolist(),
                "normalized_spectrum": artifact.normalized_spectrum.tolist(),
            },
        )
    elif isinstance(artifact, CoefficientMatrix):
        values = artifact.values
        header = ArtifactHeader(
            kind="coefficients", rows=values.shape[0], cols=values.shape[1],
            angles=artifact.angles.tolist(), provenance=provenance,
            extra={"source": artifact.source},
        )
    elif isinstance(artifact, ReconImage):
        values = artifact.pixels
        header = ArtifactHeader(
            kind="image", rows=values.shape[0], cols=values.shape[1], provenance=provenance,
            extra={"pixel_size": artifact.pixel_size},
        )
    elif isinstance(artifact, ErrorReport):
        values = artifact.error_map
        header = ArtifactHeader(
            kind="error-map", rows=values.shape[0], cols=values.shape[1], provenance=provenance,
            extra={"curve": [list(point) for point in artifact.curve]},
        )
    else:
        raise ConfigurationError(f"cannot persist objects of type {type(artifact).__name__}")
    return values, header


def save(artifact: Artifact, path: Union[str, os.PathLike], provenance: str = "") -> Tuple[Path, Path]:
    """
    Writes an artifact as payload plus sidecar.

    Args:
        artifact (Artifact): Sinogram, basis, coefficients, image or error map.
        path (PathLike): Base path; a `.bin` or `.json` suffix is stripped.
        provenance (str): Free text stored in the sidecar.

    Returns:
        Tuple[Path, Path]: The payload and sidecar paths.

    Raises:
        ArtifactIOError: If either file cannot be written.
    """
    values, header = _describe(artifact, provenance)
    payload_path, header_path = artifact_paths(path)
    try:
        payload_path.parent.mkdir(parents=True, exist_ok=True)
        payload_path.write_bytes(np.ascontiguousarray(values, dtype=_DTYPE).tobytes(order="C"))
        header_path.write_text(header.model_dump_json(indent=2), encoding="utf-8")
    except OSError as e:
        logger.exception("Failed to write artifact %s", payload_path)
        raise ArtifactIOError(f"cannot write artifact at {payload_path}: {e}") from e

    logger.info("Saved %s artifact (%d x %d) to %s", header.kind, header.rows, header.cols, payload_path)
    return payload_path, header_path


def read_header(path: Union[str, os.PathLike]) -> ArtifactHeader:
    """Parses the sidecar of an artifact."""
    _, header_path = artifact_paths(path)
    try:
        return ArtifactHeader.model_validate_json(header_path.read_text(encoding="utf-8"))
    except OSError as e:
        logger.exception("Failed to read artifact header %s", header_path)
        raise ArtifactIOError(f"cannot read artifact header {header_path}: {e}") from e
    except ValidationError as e:
        raise ArtifactIOError(f"invalid artifact header {header_path}: {e}") from e


def read_payload(path: Union[str, os.PathLike], header: ArtifactHeader) -> np.ndarray:
    """Reads the float64 payload of an artifact and checks its length against the header."""
    payload_path, _ = artifact_paths(path)
    try:
        data = payload_path.read_bytes()
    except OSError as e:
        logger.exception("Failed to read artifact payload %s", payload_path)
        raise ArtifactIOError(f"cannot read artifact payload {payload_path}: {e}") from e

    expected = header.rows * header.cols * _DTYPE.itemsize
    if len(data) != expected:
        raise ArtifactIOError(
            f"{payload_path} holds {len(data)} bytes, header announces {expected}"
        )
    return np.frombuffer(data, dtype=_DTYPE).reshape(header.rows, header.cols).astype(float)


def load(path: Union[str, os.PathLike]) -> Artifact:
    """
    Loads an artifact written by `save`.

    Raises:
        ArtifactIOError: If a file is missing, truncated or inconsistent.
    """
    header = read_header(path)
    values = read_payload(path, header)
    try:
        if header.kind == "sinogram":
            return Sinogram(values=values, angles=header.angles or [], normalized=header.normalized)
        if header.kind == "basis":
            return PodBasis(
                modes=values,
                singular_values=np.asarray(header.extra["singular_values"], dtype=float),
                normalized_spectrum=np.asarray(header.extra["normalized_spectrum"], dtype=float),
                k=int(header.extra["k"]),
            )
        if header.kind == "coefficients":
            return CoefficientMatrix(
                values=values, source=header.extra["source"],
                angles=np.asarray(header.angles or [], dtype=float),
            )
        if header.kind == "image":
            return ReconImage(pixels=values, pixel_size=float(header.extra.get("pixel_size", 1.0)))
        return ErrorReport(
            error_map=values,
            mask=~np.isnan(values),
            curve=[tuple(point) for point in header.extra.get("curve", [])],
        )
    except (KeyError, ValueError) as e:
        raise ArtifactIOError(f"artifact at {path} is inconsistent with its header: {e}") from e


def export_csv(artifact: Artifact, path: Union[str, os.PathLike]) -> Path:
    """Writes the artifact matrix as CSV with 17 significant digits."""
    values, _ = _describe(artifact, "")
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(target, values, delimiter=",", fmt="%.17g")
    except OSError as e:
        logger.exception("Failed to write CSV %s", target)
        raise ArtifactIOError(f"cannot write CSV at {target}: {e}") from e
    return target
