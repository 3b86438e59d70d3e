"""
Image Export Module.

8-bit grayscale PGM and PNG heatmaps of reconstructions and error maps.
Values are tone-mapped linearly from [low, high] (finite minimum and
maximum) to [0, 255]; NaN pixels map to 0. The mapping is written to
`<image>.json` next to the image.
"""

import json
import logging
import os
from pathlib import Path
from typing import Literal, Tuple, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # pylint: disable=wrong-import-position
import numpy as np  # pylint: disable=wrong-import-position

from app.models.arrays import ErrorReport, ReconImage  # pylint: disable=wrong-import-position
from app.utility.errors import ArtifactIOError, ConfigurationError  # pylint: disable=wrong-import-position

logger = logging.getLogger(__name__)


def tone_map(values: np.ndarray) -> Tuple[np.ndarray, float, float]:
    """Linear min-max mapping of the finite values to uint8."""
    finite = np.isfinite(values)
    if not finite.any():
        return np.zeros(values.shape, dtype=np.uint8), 0.0, 0.0
    low, high = float(values[finite].min()), float(values[finite].max())
    span = high - low if high > low else 1.0
    scaled = np.zeros(values.shape)
    scaled[finite] = np.round((values[finite] - low) / span * 255.0)
    return scaled.astype(np.uint8), low, high


def write_pgm(pixels: np.ndarray, path: Path) -> None:
    """Binary (P5) 8-bit PGM."""
    height, width = pixels.shape
    path.write_bytes(f"P5\n{width} {height}\n255\n".encode("ascii") + pixels.tobytes(order="C"))


def export_image(
    image: Union[ReconImage, ErrorReport, np.ndarray],
    path: Union[str, os.PathLike],
    fmt: Literal["pgm", "png"] = "png",
) -> Path:
    """
    Writes a heatmap of an image or error map.

    Raises:
        ConfigurationError: For an unknown format or a non 2-D array.
        ArtifactIOError: If the file cannot be written.
    """
    if isinstance(image, ReconImage):
        values = image.pixels
    elif isinstance(image, ErrorReport):
        values = image.error_map
    else:
        values = np.asarray(image, dtype=float)
    if values.ndim != 2:
        raise ConfigurationError(f"images must be 2-D, got shape {values.shape}")
    if fmt not in ("pgm", "png"):
        raise ConfigurationError(f"unknown image format '{fmt}'")

    target = Path(path)
    gray, low, high = tone_map(values)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        if fmt == "pgm":
            write_pgm(gray, target)
        else:
            plt.imsave(target, gray, cmap="gray", vmin=0, vmax=255, format="png")
        sidecar = target.with_name(target.name + ".json")
        sidecar.write_text(
            json.dumps({"format": fmt, "tone_map": "linear", "low": low, "high": high, "nan": 0}),
            encoding="utf-8",
        )
    except OSError as e:
        logger.exception("Failed to write image %s", target)
        raise ArtifactIOError(f"cannot write image at {target}: {e}") from e
    return target
