from .config import (
    OUTPUT_BASE_DIR,
    PGET_WORKERS,
    PGET_DEFAULT_SEED,
    IAEA_SINOGRAM_PATH,
    PGET_LOG_LEVEL,
)

__all__ = [
    "OUTPUT_BASE_DIR",
    "PGET_WORKERS",
    "PGET_DEFAULT_SEED",
    "IAEA_SINOGRAM_PATH",
    "PGET_LOG_LEVEL",
]
