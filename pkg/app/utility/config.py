"""
Application Configuration Module.

This module manages the loading of environment variables and the setup of
the output directory. It defines configuration constants used throughout
the application for:
- Output management (base directory for sinograms, images and reports)
- Parallel execution (worker-pool size)
- Reproducibility (default master seed)
- Reference data (path of an externally measured sinogram)
"""

import os
from dotenv import load_dotenv

load_dotenv()

# ==============================================================================
# OUTPUT MANAGEMENT
# ==============================================================================
OUTPUT_BASE_DIR = os.getenv("OUTPUT_BASE_DIR", "./output")
os.makedirs(OUTPUT_BASE_DIR, exist_ok=True)

# ==============================================================================
# PARALLEL EXECUTION
# ==============================================================================
# Results never depend on this value, only wall-clock time does
PGET_WORKERS = max(1, int(os.getenv("PGET_WORKERS", "1")))

# ==============================================================================
# REPRODUCIBILITY
# ==============================================================================
PGET_DEFAULT_SEED = int(os.getenv("PGET_DEFAULT_SEED", "42"))

# ==============================================================================
# REFERENCE DATA
# ==============================================================================
# Measured sinogram (e.g. the PWR 600-700 keV window) in CSV layout, optional
IAEA_SINOGRAM_PATH = os.getenv("IAEA_SINOGRAM_PATH")

# ==============================================================================
# LOGGING
# ==============================================================================
PGET_LOG_LEVEL = os.getenv("PGET_LOG_LEVEL", "INFO").upper()
