"""
CSV Import Module.

Reads externally measured sinograms (one row per detector, one column per
view). Delimiter and leading header rows are configurable; angles default to
0, 1, ..., N_views - 1 degrees.
"""

import csv
import logging
import os
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from app.models.arrays import Sinogram
from app.utility.errors import ArtifactIOError, ArtifactParseError, ConfigurationError

logger = logging.getLogger(__name__)


def parse_csv_sinogram(
    lines: Iterable[str],
    delimiter: str = ",",
    header_rows: int = 0,
    angles: Optional[Sequence[float]] = None,
    source: str = "<memory>",
) -> Sinogram:
    """
    Parses CSV text into a sinogram.

    Args:
        lines (Iterable[str]): Text lines of the table.
        delimiter (str): Cell delimiter.
        header_rows (int): Leading lines to skip.
        angles (Optional[Sequence[float]]): View angles; 0..N_views-1 when omitted.
        source (str): Name used in error messages.

    Raises:
        ArtifactParseError: For ragged rows, non-numeric cells or an empty table.
    """
    rows = []
    width = None
    for line_number, cells in enumerate(csv.reader(lines, delimiter=delimiter), start=1):
        if line_number <= header_rows or not any(cell.strip() for cell in cells):
            continue
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ArtifactParseError(
                f"{source}: line {line_number} has {len(cells)} cells, expected {width}",
                line=line_number,
            )
        row = []
        for column_number, cell in enumerate(cells, start=1):
            try:
                row.append(float(cell))
            except ValueError as e:
                raise ArtifactParseError(
                    f"{source}: non-numeric cell {cell!r} at line {line_number}, column {column_number}",
                    line=line_number,
                    column=column_number,
                ) from e
        rows.append(row)

    if not rows:
        raise ArtifactParseError(f"{source}: no data rows")

    values = np.asarray(rows, dtype=float)
    if angles is None:
        if values.shape[1] > 360:
            raise ConfigurationError(
                f"{source}: {values.shape[1]} views need explicit angles inside [0, 360)"
            )
        angles = np.arange(values.shape[1], dtype=float)
    sinogram = Sinogram(values=values, angles=angles)
    if sinogram.is_degenerate:
        logger.warning("Imported sinogram %s is degenerate: %d x %d", source, *values.shape)
    logger.info("Imported sinogram %s: %d detectors x %d views", source, *values.shape)
    return sinogram


def import_csv_sinogram(
    path: Union[str, os.PathLike],
    delimiter: str = ",",
    header_rows: int = 0,
    angles: Optional[Sequence[float]] = None,
) -> Sinogram:
    """
    Loads a measured sinogram from a CSV file.

    Raises:
        ArtifactIOError: If the file cannot be read.
        ArtifactParseError: If the table is malformed.
    """
    target = Path(path)
    try:
        with target.open("r", encoding="utf-8", newline="") as handle:
            return parse_csv_sinogram(handle, delimiter, header_rows, angles, source=str(target))
    except ArtifactIOError:
        raise
    except OSError as e:
        logger.exception("Failed to read CSV %s", target)
        raise ArtifactIOError(f"cannot read CSV sinogram at {target}: {e}") from e
