"""
Validation and minimality diagnostics for connections
"""
import logging
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from src.connection.base import Connection
from src.core.config import settings
from src.core.schemas.enums import EndpointKind
from src.geom.constants import BOUNDARY_CODE, OUTSIDE_CODE
from src.geom.domain import Domain, Point, Segment
from src.geom.predicates import (
    angle_to_normal,
    boundary_projection,
    classify,
    crossing_parameters,
    segment_admissible,
)

logger = logging.getLogger(__name__)


@dataclass
class ValidationReport:
    admissible: bool = True
    tagging: bool = True
    parity: bool = True
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.admissible and self.tagging and self.parity


@dataclass
class MinimalityReport:
    disjoint: bool = True
    unique_incidence: bool = True
    orthogonal: bool = True
    boundary_contact: bool = True
    max_angle: float = 0.0
    details: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.disjoint and self.unique_incidence and self.orthogonal and self.boundary_contact


def validate_connection(domain: Domain, points: Sequence[Point], c: Connection) -> ValidationReport:
    """Check admissibility, endpoint tags and odd incidence at every point"""
    report = ValidationReport()
    tol = domain.tolerance
    pts = [tuple(map(float, p)) for p in points]

    for k, s in enumerate(c.segments):
        if not segment_admissible(domain, s.segment):
            report.admissible = False
            report.details.append(f"segment {k} leaves the domain")

        kinds = [s.start.kind, s.end.kind]
        if EndpointKind.POINT not in kinds:
            report.tagging = False
            report.details.append(f"segment {k} joins two boundary points")
        for e, end in ((s.start, s.segment.p), (s.end, s.segment.q)):
            if np.hypot(end[0] - e.point[0], end[1] - e.point[1]) > tol:
                report.tagging = False
                report.details.append(f"segment {k} endpoint {end} does not match its tag")
            if e.kind == EndpointKind.POINT:
                if e.index is None or not 0 <= e.index < len(pts):
                    report.tagging = False
                    report.details.append(f"segment {k} refers to unknown point {e.index}")
                elif np.hypot(pts[e.index][0] - e.point[0], pts[e.index][1] - e.point[1]) > tol:
                    report.tagging = False
                    report.details.append(f"segment {k} misplaces point {e.index}")
            elif int(classify(domain, [e.point])[0]) != BOUNDARY_CODE:
                report.tagging = False
                report.details.append(f"segment {k} boundary foot {e.point} is off the boundary")

    counts = {i: 0 for i in range(len(pts))}
    for s in c.segments:
        for i in s.point_indices():
            if i in counts:
                counts[i] += 1
    even = [i for i, n in counts.items() if n % 2 == 0]
    if even:
        report.parity = False
        report.details.append(f"points with even incidence: {even}")

    return report


def segments_intersect(s1: Segment, s2: Segment) -> bool:
    """Closed-segment intersection test"""
    p1, q1, p2, q2 = (np.asarray(v) for v in (s1.p, s1.q, s2.p, s2.q))

    def orient(a, b, c):
        value = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        return 0 if value == 0 else (1 if value > 0 else -1)

    def on_segment(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    o1, o2 = orient(p1, q1, p2), orient(p1, q1, q2)
    o3, o4 = orient(p2, q2, p1), orient(p2, q2, q1)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p1, q1, p2):
        return True
    if o2 == 0 and on_segment(p1, q1, q2):
        return True
    if o3 == 0 and on_segment(p2, q2, p1):
        return True
    if o4 == 0 and on_segment(p2, q2, q1):
        return True
    return False


def minimality_diagnostics(domain: Domain, c: Connection, angle_tolerance: float = None) -> MinimalityReport:
    """Necessary conditions satisfied by minimal connections"""
    tau = settings.orthogonality_tolerance if angle_tolerance is None else angle_tolerance
    report = MinimalityReport()
    segments = c.segments

    for a in range(len(segments)):
        for b in range(a + 1, len(segments)):
            if segments_intersect(segments[a].segment, segments[b].segment):
                report.disjoint = False
                report.details.append(f"segments {a} and {b} intersect")

    counts = c.incidence()
    multiple = [i for i, n in counts.items() if n != 1]
    if multiple:
        report.unique_incidence = False
        report.details.append(f"points without exactly one segment: {multiple}")

    for k, s in enumerate(segments):
        for end, other in ((s.start, s.end), (s.end, s.start)):
            if end.kind != EndpointKind.BOUNDARY_FOOT:
                continue
            projection = boundary_projection(domain, end.point)
            direction = np.asarray(other.point) - np.asarray(end.point)
            angle = angle_to_normal(projection, direction)
            report.max_angle = max(report.max_angle, angle)
            if angle > tau:
                report.orthogonal = False
                report.details.append(f"segment {k} meets the boundary at {angle:.2e} rad from the normal")

        interior = _interior_boundary_contacts(domain, s.segment)
        if interior:
            report.boundary_contact = False
            report.details.append(f"segment {k} touches the boundary at interior parameters {interior}")

    return report


def _interior_boundary_contacts(domain: Domain, s: Segment) -> List[float]:
    rel = domain.tolerance / s.length
    params = [t for t in crossing_parameters(domain, s) if rel < t < 1 - rel]
    if not params:
        return []
    pts = [s.point_at(t) for t in params]
    codes = classify(domain, pts)
    return [t for t, code in zip(params, codes) if code != OUTSIDE_CODE]
