"""
test: tests/conftest.py

Shared configuration and fixtures for the pytest suite.

This module provides:
- Global environment variable mocking to isolate tests from local configuration.
- Output directory patching so no test writes outside `tmp_path`.
- Reduced geometries (small lattices, coarse grids, short detector arrays)
  that keep the compiled ray tracer and the FBP fast.
- Paths of the checked-in fixture artifacts.
"""

import os
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

from app.models.arrays import Sinogram
from app.models.schemas import AssemblySpec, DetectorArray, ExperimentConfig, FidelityConfig, GridSpec

FIXTURES_DIR = Path(__file__).parent / "fixtures"

# ==============================================================================
# GLOBAL MOCKS & PATCHES
# ==============================================================================

@pytest.fixture(scope="session", autouse=True)
def mock_env_vars():
    """
    Session-scoped fixture that mocks environment variables.
    Ensures that tests run with a consistent, isolated configuration
    and prevents accidental usage of real .env values.
    """
    with patch.dict(os.environ, {
        "OUTPUT_BASE_DIR": "./test_output",
        "PGET_WORKERS": "1",
        "PGET_DEFAULT_SEED": "42",
        "PGET_LOG_LEVEL": "WARNING",
    }):
        yield


@pytest.fixture(autouse=True)
def patch_config_variables(tmp_path):
    """
    Autouse fixture that patches OUTPUT_BASE_DIR in `app.utility.config`
    and in the modules that import it directly.

    Yields:
        str: The path to the temporary output directory.
    """
    test_output_dir = str(tmp_path / "test_output")
    os.makedirs(test_output_dir, exist_ok=True)

    with patch("app.utility.config.OUTPUT_BASE_DIR", test_output_dir), \
            patch("app.controllers.experiments.OUTPUT_BASE_DIR", test_output_dir), \
            patch("app.cli.OUTPUT_BASE_DIR", test_output_dir):
        yield test_output_dir


# ==============================================================================
# GEOMETRY FIXTURES
# ==============================================================================

@pytest.fixture
def small_assembly():
    """3x3 lattice with the corner pin (0, 0) removed: no rotational symmetry."""
    return AssemblySpec(name="small", lattice_rows=3, lattice_cols=3, missing_pins=[(0, 0)])


@pytest.fixture
def full_small_assembly():
    """Complete 3x3 lattice (4-fold symmetric)."""
    return AssemblySpec(name="small-full", lattice_rows=3, lattice_cols=3)


@pytest.fixture
def coarse_grid(small_assembly):
    """2 mm pixels, two 10 mm voxels per column."""
    return GridSpec.enclosing(small_assembly, dx=2.0, dz=10.0, half_extent_z=10.0)


@pytest.fixture
def small_array():
    """32 detectors at 2.5 mm pitch, wide enough to see the whole 3x3 lattice."""
    return DetectorArray(n_detectors=32, pitch=2.5, standoff_radius=150.0)


@pytest.fixture
def small_config(small_assembly, small_array):
    """Synthetic experiment reduced to a few trials on the 3x3 lattice."""
    return ExperimentConfig(
        ground_truth_source="synthetic",
        assembly=small_assembly,
        realtime_dx=2.0,
        dz=10.0,
        half_extent_z=10.0,
        detector=small_array,
        fidelity=FidelityConfig(dx=1.0, face_subsampling=2, count_scale=1e5, blur_rows=0.5),
        n_views=360,
        n_s_values=[40],
        trials=2,
        seed=7,
        workers=1,
    )


# ==============================================================================
# DATA FIXTURES
# ==============================================================================

@pytest.fixture
def smooth_sinogram():
    """
    24 x 360 sinogram built from four smooth angular harmonics, normalized.

    Returns:
        Sinogram: Rank-4 data with min 0 and max 1.
    """
    rows = np.linspace(-1.0, 1.0, 24)[:, None]
    theta = np.deg2rad(np.arange(360.0))[None, :]
    values = (
        np.exp(-4 * rows ** 2)
        + 0.5 * rows * np.cos(theta)
        + 0.3 * (rows ** 2) * np.sin(2 * theta)
        + 0.1 * np.cos(3 * rows) * np.cos(3 * theta)
    )
    values = (values - values.min()) / (values.max() - values.min())
    return Sinogram(values=values, angles=np.arange(360.0), normalized=True)


@pytest.fixture
def fixtures_dir():
    """Directory of the checked-in fixture artifacts."""
    return FIXTURES_DIR
