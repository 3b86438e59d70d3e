"""
Main Application Entry Point.

This module initializes the FastAPI application of the PA-POD toolkit.
It configures logging from PGET_LOG_LEVEL, Cross-Origin Resource Sharing
(CORS) for local notebooks and dashboards, and registers the experiment
routers.
"""

import logging
from typing import Dict

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.controllers.experiments import router as experiments_router
from app.utility.config import PGET_LOG_LEVEL

logging.basicConfig(
    level=PGET_LOG_LEVEL,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

# Initialize the application instance
app = FastAPI(
    title="PGET Reduced-Order Reconstruction",
    version="1.0.0",
)

# ------------------------------------------------------------------
# CORS CONFIGURATION
# ------------------------------------------------------------------

# Local development clients (notebooks, dashboards)
origins = [
    "http://localhost:8888",
    "http://127.0.0.1:8888",
    "http://localhost:5173",
]

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# ------------------------------------------------------------------
# ROUTER REGISTRATION
# ------------------------------------------------------------------

app.include_router(experiments_router, prefix="/api", tags=["Experiments"])


# ------------------------------------------------------------------
# ROOT ENDPOINT
# ------------------------------------------------------------------

@app.get("/")
def root() -> Dict[str, str]:
    """
    Root endpoint to verify backend availability.

    Returns:
        Dict[str, str]: A simple status message indicating the service is running.
    """
    return {"message": "PGET ROM backend is running"}
