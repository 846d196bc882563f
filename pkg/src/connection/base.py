"""
Connection types and the base solver interface
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import CapacityError, DomainError
from src.core.schemas.enums import EndpointKind, SegmentKind
from src.core.schemas.geometry import ConnectionDocument, EndpointTag, SegmentRecord
from src.geom.constants import BOUNDARY_CODE, INSIDE_CODE
from src.geom.domain import Domain, Point, Segment
from src.geom.predicates import (
    boundary_projection,
    classify,
    clip_to_domain,
    segment_admissible,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Endpoint:
    """Segment endpoint: a singular point index or a boundary foot"""
    kind: EndpointKind
    point: Point
    index: Optional[int] = None

    @classmethod
    def at_point(cls, index: int, point: Point) -> "Endpoint":
        return cls(EndpointKind.POINT, (float(point[0]), float(point[1])), index)

    @classmethod
    def on_boundary(cls, point: Point) -> "Endpoint":
        return cls(EndpointKind.BOUNDARY_FOOT, (float(point[0]), float(point[1])))


@dataclass(frozen=True)
class ConnectionSegment:
    segment: Segment
    start: Endpoint
    end: Endpoint
    kind: SegmentKind

    @property
    def length(self) -> float:
        return self.segment.length

    def point_indices(self) -> List[int]:
        return [e.index for e in (self.start, self.end) if e.kind == EndpointKind.POINT]


@dataclass
class Connection:
    """Segment system joining singular points to each other or to the boundary"""
    points: List[Point]
    segments: List[ConnectionSegment] = field(default_factory=list)
    total_length: float = 0.0

    @classmethod
    def from_segments(cls, points: Sequence[Point], segments: Sequence[ConnectionSegment]) -> "Connection":
        ordered = sorted(segments, key=lambda s: s.segment.key)
        total = math.fsum(s.length for s in ordered)
        return cls(points=[tuple(map(float, p)) for p in points], segments=ordered, total_length=total)

    @property
    def sort_key(self) -> Tuple:
        return tuple(s.segment.key for s in self.segments)

    def incidence(self) -> Dict[int, int]:
        counts = {i: 0 for i in range(len(self.points))}
        for s in self.segments:
            for i in s.point_indices():
                counts[i] = counts.get(i, 0) + 1
        return counts

    def cut_segments(self) -> List[Segment]:
        return [s.segment for s in self.segments]

    def to_document(self, domain_name: str) -> ConnectionDocument:
        def tag(e: Endpoint) -> EndpointTag:
            return EndpointTag(kind=e.kind, index=e.index, point=e.point)

        return ConnectionDocument(
            domain=domain_name,
            points=self.points,
            segments=[
                SegmentRecord(start=tag(s.start), end=tag(s.end), kind=s.kind, length=s.length)
                for s in self.segments
            ],
            total_length=self.total_length,
        )

    @classmethod
    def from_document(cls, doc: ConnectionDocument) -> "Connection":
        segments = []
        for rec in doc.segments:
            ends = [Endpoint(t.kind, tuple(t.point), t.index) for t in (rec.start, rec.end)]
            segments.append(ConnectionSegment(Segment(ends[0].point, ends[1].point), ends[0], ends[1], rec.kind))
        return cls.from_segments(doc.points, segments)

    @classmethod
    def empty(cls, points: Sequence[Point] = ()) -> "Connection":
        return cls.from_segments(points, [])


@dataclass
class CostTable:
    """Pairing and boundary costs computed once per solve"""
    boundary: np.ndarray
    boundary_segments: List[ConnectionSegment]
    pair: np.ndarray
    pair_segments: Dict[Tuple[int, int], List[ConnectionSegment]]

    def realize(self, choice: Tuple[int, Optional[int]]) -> List[ConnectionSegment]:
        i, j = choice
        if j is None:
            return [self.boundary_segments[i]]
        return self.pair_segments[(min(i, j), max(i, j))]


def build_cost_table(domain: Domain, points: Sequence[Point]) -> CostTable:
    """Admissibility matrix and boundary distances for a point set"""
    p = len(points)
    boundary = np.empty(p)
    boundary_segments = []
    for i, a in enumerate(points):
        proj = boundary_projection(domain, a)
        boundary[i] = proj.distance
        boundary_segments.append(
            ConnectionSegment(
                Segment(a, proj.foot), Endpoint.at_point(i, a), Endpoint.on_boundary(proj.foot), SegmentKind.BOUNDARY
            )
        )

    pair = np.full((p, p), np.inf)
    pair_segments: Dict[Tuple[int, int], List[ConnectionSegment]] = {}
    for i in range(p):
        for j in range(i + 1, p):
            a, b = points[i], points[j]
            seg = Segment(a, b)
            if segment_admissible(domain, seg):
                pieces = [ConnectionSegment(seg, Endpoint.at_point(i, a), Endpoint.at_point(j, b), SegmentKind.PAIR)]
            else:
                pieces = _clipped_pairing(domain, i, j, a, b, seg)
            if pieces:
                pair[i, j] = pair[j, i] = sum(s.length for s in pieces)
                pair_segments[(i, j)] = pieces
    return CostTable(boundary, boundary_segments, pair, pair_segments)


def _clipped_pairing(domain: Domain, i: int, j: int, a: Point, b: Point, seg: Segment) -> List[ConnectionSegment]:
    """Two clipped components of an exiting segment, when both reach the boundary"""
    components = clip_to_domain(domain, seg)
    if len(components) < 2:
        return []
    first, last = components[0], components[-1]
    exits = classify(domain, [first.q, last.p])
    if not np.all(exits == BOUNDARY_CODE):
        return []
    return [
        ConnectionSegment(first, Endpoint.at_point(i, a), Endpoint.on_boundary(first.q), SegmentKind.CLIPPED),
        ConnectionSegment(last, Endpoint.on_boundary(last.p), Endpoint.at_point(j, b), SegmentKind.CLIPPED),
    ]


class BaseConnectionSolver(ABC):
    """Abstract base class for minimal-connection solvers"""

    name = "base"

    def __init__(self, max_points: int):
        self.max_points = max_points

    @abstractmethod
    def solve(self, domain: Domain, points: Sequence[Point]) -> Connection:
        """Return a connection of minimal total length"""
        pass

    def _check_points(self, domain: Domain, points: Sequence[Point]) -> List[Point]:
        pts = [tuple(map(float, p)) for p in points]
        if len(pts) > self.max_points:
            raise CapacityError(f"{self.name} point count", len(pts), self.max_points)
        if len(set(pts)) != len(pts):
            raise DomainError("Singular points must be distinct", error_code="connection.DUPLICATE_POINTS")
        if pts:
            codes = classify(domain, pts)
            outside = [pts[k] for k in np.flatnonzero(codes != INSIDE_CODE)]
            if outside:
                raise DomainError(
                    f"Singular points must lie strictly inside the domain: {outside}",
                    error_code="connection.POINT_NOT_INTERIOR"
                )
        return pts
