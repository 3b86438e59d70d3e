"""
Package `app.services.storage`

Persistence of artifacts (binary payload + JSON sidecar), CSV export and
import, grayscale image export.
"""

from .artifacts import artifact_paths, export_csv, load, read_header, save
from .csv_import import import_csv_sinogram, parse_csv_sinogram
from .images import export_image

__all__ = [
    "artifact_paths",
    "export_csv",
    "export_image",
    "import_csv_sinogram",
    "load",
    "parse_csv_sinogram",
    "read_header",
    "save",
]
