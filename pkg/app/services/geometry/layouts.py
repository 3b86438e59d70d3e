"""
Layout Loading Module.

This module loads assembly layouts from JSON key-value files. Bundled
layouts live in the `layouts/` directory next to this module.

Key Features:
- Robust loading: reads from the filesystem first, falling back to
  package resources when the package is installed zipped.
- Validation: every layout is turned into an `AssemblySpec`, so invalid
  lattices surface as configuration errors.
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional

from importlib import resources

from pydantic import ValidationError

from app.models.schemas import AssemblySpec
from app.utility.errors import ArtifactIOError, ConfigurationError

_LAYOUTS_DIR = os.path.join(os.path.dirname(__file__), "layouts")

logger = logging.getLogger(__name__)


def _read_from_filesystem(filename: str) -> Optional[Dict[str, Any]]:
    path = os.path.join(_LAYOUTS_DIR, filename)
    if not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as file_handle:
        return json.load(file_handle)


def _read_from_resources(filename: str) -> Optional[Dict[str, Any]]:
    if not __package__:
        return None
    try:
        text = resources.files(__package__).joinpath("layouts", filename).read_text(encoding="utf-8")
    except (FileNotFoundError, ModuleNotFoundError, NotADirectoryError):
        return None
    return json.loads(text)


def spec_from_mapping(data: Dict[str, Any]) -> AssemblySpec:
    """
    Builds an AssemblySpec from a parsed key-value mapping.

    Keys not known to AssemblySpec (e.g. "description") are ignored.

    Raises:
        ConfigurationError: If the mapping does not describe a valid lattice.
    """
    known = {key: value for key, value in data.items() if key in AssemblySpec.model_fields}
    try:
        return AssemblySpec(**known)
    except ValidationError as exc:
        raise ConfigurationError(f"Invalid assembly layout: {exc}") from exc


def load_layout_file(path: str) -> AssemblySpec:
    """
    Loads an assembly layout from an arbitrary JSON file.

    Raises:
        ArtifactIOError: If the file cannot be read or is not valid JSON.
        ConfigurationError: If the layout is not a valid lattice.
    """
    try:
        with open(path, "r", encoding="utf-8") as file_handle:
            data = json.load(file_handle)
    except (OSError, json.JSONDecodeError) as exc:
        logger.exception("Failed to read layout file %s", path)
        raise ArtifactIOError(f"Cannot read layout file {path}: {exc}") from exc
    return spec_from_mapping(data)


def load_layout(name: str) -> AssemblySpec:
    """
    Loads a bundled layout by name (e.g. "pwr_10x10_3x3gap").

    Raises:
        ConfigurationError: If no bundled layout has that name.
    """
    filename = f"{name}.json"
    data = _read_from_filesystem(filename)
    if data is None:
        data = _read_from_resources(filename)
    if data is None:
        raise ConfigurationError(
            f"Unknown layout '{name}'. Available: {', '.join(available_layouts())}"
        )
    logger.debug("Loaded layout %s", name)
    return spec_from_mapping(data)


def available_layouts() -> List[str]:
    """Names of the bundled layouts."""
    if not os.path.isdir(_LAYOUTS_DIR):
        return []
    return sorted(f[:-5] for f in os.listdir(_LAYOUTS_DIR) if f.endswith(".json"))
