from .schemas import (
    ALL_METHODS,
    ArtifactHeader,
    AssemblySpec,
    CoefficientReport,
    CompareResponse,
    ConvergencePoint,
    ConvergeResponse,
    DetectorArray,
    ExperimentConfig,
    FidelityConfig,
    ForwardRequest,
    GridSpec,
    MethodAggregate,
    SinogramPayload,
    SinogramResponse,
    SpectrumReport,
    TrialResult,
)
from .arrays import (
    Baseline,
    CoefficientMatrix,
    ComparisonOutcome,
    ErrorReport,
    MaterialMap,
    PodBasis,
    ReconImage,
    ResponseTables,
    Sinogram,
    SnapshotDatabase,
)

__all__ = [
    "ALL_METHODS",
    "ArtifactHeader",
    "AssemblySpec",
    "CoefficientReport",
    "CompareResponse",
    "ConvergencePoint",
    "ConvergeResponse",
    "DetectorArray",
    "ExperimentConfig",
    "FidelityConfig",
    "ForwardRequest",
    "GridSpec",
    "MethodAggregate",
    "SinogramPayload",
    "SinogramResponse",
    "SpectrumReport",
    "TrialResult",
    "Baseline",
    "CoefficientMatrix",
    "ComparisonOutcome",
    "ErrorReport",
    "MaterialMap",
    "PodBasis",
    "ReconImage",
    "ResponseTables",
    "Sinogram",
    "SnapshotDatabase",
]
