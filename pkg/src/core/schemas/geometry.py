"""
Geometry file schemas
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

from src.core.schemas.enums import EndpointKind, SegmentKind


class DomainFile(BaseModel):
    """Boundary polyline stored on disk"""
    name: str = Field(..., min_length=1)
    vertices: List[Tuple[float, float]] = Field(..., min_length=3)
    h: Optional[float] = Field(None, gt=0)


class EndpointTag(BaseModel):
    kind: EndpointKind
    index: Optional[int] = Field(None, ge=0)
    point: Tuple[float, float]


class SegmentRecord(BaseModel):
    start: EndpointTag
    end: EndpointTag
    kind: SegmentKind
    length: float = Field(..., ge=0)


class ConnectionDocument(BaseModel):
    """Connection as written by `connect`"""
    domain: str
    points: List[Tuple[float, float]]
    segments: List[SegmentRecord]
    total_length: float = Field(..., ge=0)
