from src.geom.domain import Domain, Point, Projection, Segment
from src.geom.domain_factory import domain_factory
from src.geom.predicates import (
    boundary_distance,
    boundary_geodesic,
    boundary_projection,
    chord_arc_constant,
    classify,
    clip_to_domain,
    contains,
    nearest_arclength,
    segment_admissible,
    signed_distance,
)
from src.geom.shapes import disk, ellipse, kidney, rounded_square

__all__ = [
    "Domain",
    "Point",
    "Projection",
    "Segment",
    "domain_factory",
    "boundary_distance",
    "boundary_geodesic",
    "boundary_projection",
    "chord_arc_constant",
    "classify",
    "clip_to_domain",
    "contains",
    "nearest_arclength",
    "segment_admissible",
    "signed_distance",
    "disk",
    "ellipse",
    "kidney",
    "rounded_square",
]
