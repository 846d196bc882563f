"""
Pydantic schemas for experiment descriptions and result documents
"""
from src.core.schemas.enums import (
    ArcClass,
    Containment,
    ContactKind,
    CorrespondenceDirection,
    EndpointKind,
    FieldFormat,
    MagnetizationBoundary,
    RunMode,
    SegmentKind,
)
from src.core.schemas.geometry import (
    ConnectionDocument,
    DomainFile,
    EndpointTag,
    SegmentRecord,
)
from src.core.schemas.experiment import ExperimentSpec
from src.core.schemas.reports import (
    DefectRecord,
    PipelineComparison,
    RunManifest,
    SimulationSummary,
    WallRecord,
)

__all__ = [
    # Enums
    "ArcClass",
    "Containment",
    "ContactKind",
    "CorrespondenceDirection",
    "EndpointKind",
    "FieldFormat",
    "MagnetizationBoundary",
    "RunMode",
    "SegmentKind",
    # Geometry
    "ConnectionDocument",
    "DomainFile",
    "EndpointTag",
    "SegmentRecord",
    # Runs
    "ExperimentSpec",
    "DefectRecord",
    "PipelineComparison",
    "RunManifest",
    "SimulationSummary",
    "WallRecord",
]
