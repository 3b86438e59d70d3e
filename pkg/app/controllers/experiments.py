"""
Experiments Controller Module.

This module exposes the pipeline over HTTP: Real-Time Model sinograms,
singular-value spectra, method comparisons, convergence sweeps and the
import of measured sinograms.

Errors are mapped to status codes:
- ValueError family (invalid configuration, geometry, shapes, parse errors): 400
- Missing or unreadable artifacts: 404
- Numerical failures and anything unexpected: 500
"""

from pathlib import Path

import numpy as np
from fastapi import APIRouter, File, Form, HTTPException, UploadFile

from app.models.arrays import Sinogram
from app.models.schemas import (
    CompareResponse,
    ConvergeResponse,
    ExperimentConfig,
    ForwardRequest,
    GridSpec,
    SinogramPayload,
    SinogramResponse,
    SpectrumReport,
)
from app.services.bench import (
    median_map_fractions,
    run_comparison,
    run_convergence,
    run_spectrum,
    view_angles,
)
from app.services.forward import full_sinogram, normalize_sinogram
from app.services.geometry import load_layout
from app.services.storage import parse_csv_sinogram, save
from app.utility.config import OUTPUT_BASE_DIR
from app.utility.errors import ArtifactIOError, ArtifactParseError, NumericalError

router = APIRouter()


def _to_response(sinogram: Sinogram) -> SinogramResponse:
    return SinogramResponse(
        rows=sinogram.n_detectors,
        cols=sinogram.n_views,
        angles=sinogram.angles.tolist(),
        normalized=sinogram.normalized,
        values=sinogram.values.tolist(),
    )


# ------------------------------------------------------------------
# 1. FORWARD MODEL
# ------------------------------------------------------------------

@router.post("/forward", response_model=SinogramResponse)
def forward_sinogram(payload: ForwardRequest) -> SinogramResponse:
    """
    Computes the Real-Time Model sinogram of an assembly.

    Args:
        payload (ForwardRequest): Layout or explicit assembly, pixel size,
            detector array and number of views.

    Returns:
        SinogramResponse: N x n_views sinogram, normalized on request.

    Raises:
        HTTPException:
            - 400: If the configuration or the geometry is invalid.
            - 500: If the computation fails.
    """
    try:
        spec = payload.assembly or load_layout(payload.layout)
        grid = GridSpec.enclosing(spec, payload.dx)
        sinogram = full_sinogram(spec, grid, payload.detector, view_angles(payload.n_views))
        if payload.normalize:
            sinogram = normalize_sinogram(sinogram)
        return _to_response(sinogram)

    except ValueError as ve:
        raise HTTPException(status_code=400, detail=str(ve)) from ve
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}") from e


# ------------------------------------------------------------------
# 2. SPECTRUM
# ------------------------------------------------------------------

@router.post("/spectrum", response_model=SpectrumReport)
def spectrum(payload: SinogramPayload) -> SpectrumReport:
    """
    Singular-value spectrum of an inline sinogram.

    Raises:
        HTTPException:
            - 400: If the sinogram is malformed.
            - 500: If the sinogram is identically zero or the SVD fails.
    """
    try:
        values = np.asarray(payload.values, dtype=float)
        angles = payload.angles if payload.angles is not None else np.arange(values.shape[-1])
        return run_spectrum(Sinogram(values=values, angles=angles))

    except ValueError as ve:
        raise HTTPException(status_code=400, detail=str(ve)) from ve
    except NumericalError as ne:
        raise HTTPException(status_code=500, detail=str(ne)) from ne
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}") from e


# ------------------------------------------------------------------
# 3. EXPERIMENTS
# ------------------------------------------------------------------

@router.post("/compare", response_model=CompareResponse)
def compare(config: ExperimentConfig) -> CompareResponse:
    """
    Runs a method comparison over random view sets.

    Returns:
        CompareResponse: Trials, aggregates and median-map pixel fractions.

    Raises:
        HTTPException:
            - 400: If the configuration is invalid.
            - 404: If the measured ground truth cannot be read.
            - 500: If a numerical stage fails.
    """
    try:
        outcome = run_comparison(config)
        return CompareResponse(
            trials=outcome.trials,
            aggregates=outcome.aggregates,
            median_map_fractions=median_map_fractions(outcome, config.threshold),
        )

    except ValueError as ve:
        raise HTTPException(status_code=400, detail=str(ve)) from ve
    except ArtifactIOError as ae:
        raise HTTPException(status_code=404, detail=str(ae)) from ae
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}") from e


@router.post("/converge", response_model=ConvergeResponse)
def converge(config: ExperimentConfig) -> ConvergeResponse:
    """
    Runs the PA-POD convergence sweep over the configured n_s values.

    Raises:
        HTTPException:
            - 400: If the configuration is invalid.
            - 404: If the measured ground truth cannot be read.
            - 500: If a numerical stage fails.
    """
    try:
        outcome = run_convergence(config)
        return ConvergeResponse(points=outcome.points, trials=outcome.trials)

    except ValueError as ve:
        raise HTTPException(status_code=400, detail=str(ve)) from ve
    except ArtifactIOError as ae:
        raise HTTPException(status_code=404, detail=str(ae)) from ae
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}") from e


# ------------------------------------------------------------------
# 4. IMPORT
# ------------------------------------------------------------------

@router.post("/import", response_model=SinogramResponse)
def import_sinogram(
        delimiter: str = Form(","),
        header_rows: int = Form(0),
        uploaded_file: UploadFile = File(...)
) -> SinogramResponse:
    """
    Imports a measured sinogram from an uploaded CSV table and stores it as
    an artifact under OUTPUT_BASE_DIR/imports.

    Raises:
        HTTPException:
            - 400: If the table is malformed.
            - 500: If the artifact cannot be stored.
    """
    try:
        text = uploaded_file.file.read().decode("utf-8")
        name = Path(uploaded_file.filename or "upload.csv").stem
        sinogram = parse_csv_sinogram(
            text.splitlines(), delimiter=delimiter, header_rows=header_rows, source=name
        )
        save(sinogram, Path(OUTPUT_BASE_DIR) / "imports" / name, provenance=f"upload {name}")
        return _to_response(sinogram)

    except (ArtifactParseError, ValueError) as pe:
        raise HTTPException(status_code=400, detail=str(pe)) from pe
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Internal error: {str(e)}") from e
