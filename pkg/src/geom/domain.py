"""
Planar domains bounded by a closed counterclockwise polyline
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import DomainError

logger = logging.getLogger(__name__)

Point = Tuple[float, float]


def _as_point(x) -> Point:
    arr = np.asarray(x, dtype=float).reshape(2)
    return (float(arr[0]), float(arr[1]))


@dataclass(frozen=True)
class Segment:
    """Closed non-degenerate straight segment"""
    p: Point
    q: Point

    def __post_init__(self):
        object.__setattr__(self, "p", _as_point(self.p))
        object.__setattr__(self, "q", _as_point(self.q))
        if self.p == self.q:
            raise DomainError(f"Degenerate segment at {self.p}", error_code="geom.DEGENERATE_SEGMENT")

    @property
    def length(self) -> float:
        return math.hypot(self.q[0] - self.p[0], self.q[1] - self.p[1])

    @property
    def direction(self) -> np.ndarray:
        return np.array([self.q[0] - self.p[0], self.q[1] - self.p[1]])

    def point_at(self, t: float) -> Point:
        return (self.p[0] + t * (self.q[0] - self.p[0]), self.p[1] + t * (self.q[1] - self.p[1]))

    def sample(self, count: int) -> np.ndarray:
        t = np.linspace(0.0, 1.0, count)[:, None]
        return np.asarray(self.p) + t * self.direction

    @property
    def key(self) -> Tuple[Point, Point]:
        """Endpoints in sorted order, used for deterministic tie-breaking"""
        return tuple(sorted((self.p, self.q)))


@dataclass
class Projection:
    """Closest boundary point of an interior point"""
    distance: float
    foot: Point
    inward_normal: Tuple[float, float]
    arclength: float
    at_vertex: bool = False
    multiple: bool = False
    candidates: List[float] = field(default_factory=list)
    normal_cone: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None


class Domain:
    """Simply connected region given by its boundary polyline"""

    def __init__(
        self,
        vertices,
        name: str = "custom",
        h: Optional[float] = None,
        turning_angle_cap: Optional[float] = None,
        validate: bool = True,
    ):
        verts = np.asarray(vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
            raise DomainError("Boundary needs at least three [x, y] vertices", error_code="geom.INVALID")
        if np.allclose(verts[0], verts[-1]):
            verts = verts[:-1]
        if not np.all(np.isfinite(verts)):
            raise DomainError("Boundary vertices must be finite", error_code="geom.INVALID")

        area = self._signed_area(verts)
        if area < 0:
            logger.debug(f"Reorienting clockwise boundary of domain '{name}'")
            verts = verts[::-1].copy()
            area = -area

        self.name = name
        self.vertices = verts
        self.area = area
        self.h = h
        self.turning_angle_cap = turning_angle_cap or settings.turning_angle_cap

        self.starts = verts
        self.ends = np.roll(verts, -1, axis=0)
        self.edges = self.ends - self.starts
        self.edge_lengths = np.hypot(self.edges[:, 0], self.edges[:, 1])
        self.arclength_starts = np.concatenate(([0.0], np.cumsum(self.edge_lengths)[:-1]))
        self.perimeter = float(self.edge_lengths.sum())
        self.normals = np.stack([-self.edges[:, 1], self.edges[:, 0]], axis=1) / self.edge_lengths[:, None]

        diffs = verts[:, None, :] - verts[None, :, :]
        self.diameter = float(np.sqrt((diffs ** 2).sum(axis=2)).max())
        self.tolerance = settings.geom_tolerance_factor * self.diameter

        if validate:
            self._validate()

    @staticmethod
    def _signed_area(verts: np.ndarray) -> float:
        x, y = verts[:, 0], verts[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    def _validate(self) -> None:
        if np.any(self.edge_lengths <= self.tolerance):
            raise DomainError(f"Domain '{self.name}' has repeated vertices", error_code="geom.INVALID")

        turns = self.turning_angles()
        worst = float(np.abs(turns).max())
        if worst > self.turning_angle_cap:
            raise DomainError(
                f"Domain '{self.name}' turns by {worst:.3f} rad at a vertex (cap {self.turning_angle_cap:.3f})",
                error_code="geom.NOT_SMOOTH"
            )

        if not self._is_simple():
            raise DomainError(f"Domain '{self.name}' boundary self-intersects", error_code="geom.NOT_SIMPLE")

    def turning_angles(self) -> np.ndarray:
        """Signed turning angle at each vertex (between incoming and outgoing edge)"""
        incoming = np.roll(self.edges, 1, axis=0)
        outgoing = self.edges
        cross = incoming[:, 0] * outgoing[:, 1] - incoming[:, 1] * outgoing[:, 0]
        dot = (incoming * outgoing).sum(axis=1)
        return np.arctan2(cross, dot)

    def _is_simple(self) -> bool:
        n = len(self.vertices)
        a, b = self.starts, self.ends

        def orient(p, q, r):
            return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

        ai, bi = a[:, None, :], b[:, None, :]
        aj, bj = a[None, :, :], b[None, :, :]
        o1 = orient(ai, bi, aj)
        o2 = orient(ai, bi, bj)
        o3 = orient(aj, bj, ai)
        o4 = orient(aj, bj, bi)
        crossing = (o1 * o2 < 0) & (o3 * o4 < 0)

        idx = np.arange(n)
        gap = np.abs(idx[:, None] - idx[None, :])
        adjacent = (gap <= 1) | (gap == n - 1)
        crossing &= ~adjacent
        return not bool(crossing.any())

    @property
    def bounding_box(self) -> Tuple[float, float, float, float]:
        xmin, ymin = self.vertices.min(axis=0)
        xmax, ymax = self.vertices.max(axis=0)
        return float(xmin), float(ymin), float(xmax), float(ymax)

    def point_at_arclength(self, s: float) -> Point:
        s = float(s) % self.perimeter
        k = int(np.searchsorted(self.arclength_starts, s, side="right") - 1)
        t = (s - self.arclength_starts[k]) / self.edge_lengths[k]
        p = self.starts[k] + t * self.edges[k]
        return (float(p[0]), float(p[1]))

    def transformed(self, scale: float = 1.0, angle: float = 0.0, shift: Point = (0.0, 0.0)) -> "Domain":
        """Similar copy: rotate by `angle`, scale, then shift"""
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        verts = scale * self.vertices @ rot.T + np.asarray(shift)
        h = None if self.h is None else self.h * scale
        return Domain(verts, name=self.name, h=h, turning_angle_cap=self.turning_angle_cap)

    def __repr__(self) -> str:
        return f"Domain(name={self.name!r}, vertices={len(self.vertices)}, perimeter={self.perimeter:.6f})"
