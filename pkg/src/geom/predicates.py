"""
Containment, projection, admissibility and clipping against a domain
"""
import logging
import math
from typing import List, Sequence

import numpy as np

from src.core.exceptions import DomainError
from src.core.schemas.enums import Containment
from src.geom.constants import BOUNDARY_CODE, CLASSIFY_CHUNK, INSIDE_CODE, OUTSIDE_CODE
from src.geom.domain import Domain, Point, Projection, Segment

logger = logging.getLogger(__name__)


def _edge_distances(domain: Domain, points: np.ndarray):
    """Distances from each point to each boundary edge, with projection parameters"""
    rel = points[:, None, :] - domain.starts[None, :, :]
    t = (rel * domain.edges[None, :, :]).sum(axis=2) / (domain.edge_lengths ** 2)[None, :]
    t = np.clip(t, 0.0, 1.0)
    feet = domain.starts[None, :, :] + t[..., None] * domain.edges[None, :, :]
    dist = np.hypot(points[:, None, 0] - feet[..., 0], points[:, None, 1] - feet[..., 1])
    return dist, t, feet


def _crossing_parity(domain: Domain, points: np.ndarray) -> np.ndarray:
    ax, ay = domain.starts[:, 0][None, :], domain.starts[:, 1][None, :]
    bx, by = domain.ends[:, 0][None, :], domain.ends[:, 1][None, :]
    px, py = points[:, 0][:, None], points[:, 1][:, None]
    straddle = (ay > py) != (by > py)
    dy = np.where(straddle, by - ay, 1.0)
    xint = ax + (py - ay) * (bx - ax) / dy
    crossings = straddle & (px < xint)
    return (crossings.sum(axis=1) % 2) == 1


def boundary_distance(domain: Domain, points) -> np.ndarray:
    """Unsigned distance of each point to the boundary polyline"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(pts))
    for start in range(0, len(pts), CLASSIFY_CHUNK):
        chunk = pts[start:start + CLASSIFY_CHUNK]
        dist, _, _ = _edge_distances(domain, chunk)
        out[start:start + CLASSIFY_CHUNK] = dist.min(axis=1)
    return out


def classify(domain: Domain, points) -> np.ndarray:
    """Vectorised containment codes: 1 inside, 0 boundary, −1 outside"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    codes = np.empty(len(pts), dtype=int)
    for start in range(0, len(pts), CLASSIFY_CHUNK):
        chunk = pts[start:start + CLASSIFY_CHUNK]
        dist, _, _ = _edge_distances(domain, chunk)
        near = dist.min(axis=1) <= domain.tolerance
        inside = _crossing_parity(domain, chunk)
        block = np.where(inside, INSIDE_CODE, OUTSIDE_CODE)
        block[near] = BOUNDARY_CODE
        codes[start:start + CLASSIFY_CHUNK] = block
    return codes


def signed_distance(domain: Domain, points) -> np.ndarray:
    """Distance to the boundary, positive inside and negative outside"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dist = boundary_distance(domain, pts)
    codes = classify(domain, pts)
    return np.where(codes == OUTSIDE_CODE, -dist, dist)


def nearest_arclength(domain: Domain, points) -> np.ndarray:
    """Arc-length parameter of the nearest boundary point, vectorised"""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(pts))
    for start in range(0, len(pts), CLASSIFY_CHUNK):
        chunk = pts[start:start + CLASSIFY_CHUNK]
        dist, t, _ = _edge_distances(domain, chunk)
        k = dist.argmin(axis=1)
        rows = np.arange(len(chunk))
        out[start:start + CLASSIFY_CHUNK] = domain.arclength_starts[k] + t[rows, k] * domain.edge_lengths[k]
    return np.mod(out, domain.perimeter)


def contains(domain: Domain, x) -> Containment:
    code = int(classify(domain, [x])[0])
    if code == INSIDE_CODE:
        return Containment.INSIDE
    if code == BOUNDARY_CODE:
        return Containment.BOUNDARY
    return Containment.OUTSIDE


def boundary_projection(domain: Domain, x) -> Projection:
    """Closest point of the boundary polyline, with its inward normal"""
    point = np.asarray(x, dtype=float).reshape(1, 2)
    dist, t, feet = _edge_distances(domain, point)
    dist, t, feet = dist[0], t[0], feet[0]
    dmin = float(dist.min())
    tol = domain.tolerance

    candidates = np.flatnonzero(dist <= dmin + tol)
    arclengths = domain.arclength_starts[candidates] + t[candidates] * domain.edge_lengths[candidates]
    arclengths = np.where(arclengths >= domain.perimeter - tol, 0.0, arclengths)
    order = np.argsort(arclengths, kind="stable")

    distinct: List[int] = []
    for k in order:
        foot = feet[candidates[k]]
        if all(np.hypot(*(foot - feet[candidates[j]])) > tol for j in distinct):
            distinct.append(k)

    best = distinct[0]
    edge = int(candidates[best])
    foot = feet[edge]
    n = len(domain.vertices)

    at_vertex = False
    cone = None
    if t[edge] * domain.edge_lengths[edge] <= tol:
        at_vertex = True
        prev_normal, next_normal = domain.normals[(edge - 1) % n], domain.normals[edge]
    elif (1.0 - t[edge]) * domain.edge_lengths[edge] <= tol:
        at_vertex = True
        prev_normal, next_normal = domain.normals[edge], domain.normals[(edge + 1) % n]

    if at_vertex:
        bisector = prev_normal + next_normal
        normal = bisector / np.hypot(*bisector)
        cone = (tuple(map(float, prev_normal)), tuple(map(float, next_normal)))
    else:
        normal = domain.normals[edge]

    if len(distinct) > 1:
        logger.debug(f"Point {tuple(point[0])} has {len(distinct)} nearest boundary feet")

    return Projection(
        distance=dmin,
        foot=(float(foot[0]), float(foot[1])),
        inward_normal=(float(normal[0]), float(normal[1])),
        arclength=float(arclengths[best]),
        at_vertex=at_vertex,
        multiple=len(distinct) > 1,
        candidates=[float(arclengths[k]) for k in distinct],
        normal_cone=cone,
    )


def angle_to_normal(projection: Projection, direction) -> float:
    """Angle between a direction leaving the boundary and the inward normal at the foot.

    At a vertex the normal is the cone spanned by the two adjacent edge normals.
    """
    d = np.asarray(direction, dtype=float)
    d = d / np.hypot(*d)

    def angle(u):
        return math.acos(float(np.clip(np.dot(d, u), -1.0, 1.0)))

    if projection.normal_cone is None:
        return angle(np.asarray(projection.inward_normal))

    n1, n2 = (np.asarray(v) for v in projection.normal_cone)
    span = angle_between(n1, n2)
    if abs(angle(n1) + angle(n2) - span) <= 1e-9:
        return 0.0
    return min(angle(n1), angle(n2))


def angle_between(u, v) -> float:
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    return abs(math.atan2(u[0] * v[1] - u[1] * v[0], float(np.dot(u, v))))


def crossing_parameters(domain: Domain, s: Segment) -> np.ndarray:
    """Parameters along s where it meets the boundary polyline, plus 0 and 1"""
    p = np.asarray(s.p)
    r = s.direction
    rr = float(np.dot(r, r))
    a, d = domain.starts, domain.edges
    ap = a - p
    denom = r[0] * d[:, 1] - r[1] * d[:, 0]
    cross_ap_d = ap[:, 0] * d[:, 1] - ap[:, 1] * d[:, 0]
    cross_ap_r = ap[:, 0] * r[1] - ap[:, 1] * r[0]

    eps = 1e-12
    params = [0.0, 1.0]

    regular = np.abs(denom) > eps * np.sqrt(rr) * domain.edge_lengths
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(regular, cross_ap_d / np.where(regular, denom, 1.0), np.nan)
        u = np.where(regular, cross_ap_r / np.where(regular, denom, 1.0), np.nan)
    hit = regular & (u >= -eps) & (u <= 1 + eps) & (t >= -eps) & (t <= 1 + eps)
    params.extend(np.clip(t[hit], 0.0, 1.0).tolist())

    # collinear overlaps contribute the overlapping edge endpoints
    collinear = (~regular) & (np.abs(cross_ap_r) <= domain.tolerance * np.sqrt(rr))
    for k in np.flatnonzero(collinear):
        for end in (domain.starts[k], domain.ends[k]):
            tk = float(np.dot(end - p, r) / rr)
            if 0.0 <= tk <= 1.0:
                params.append(tk)

    return np.unique(np.asarray(params))


def _inside_intervals(domain: Domain, s: Segment):
    ts = crossing_parameters(domain, s)
    lo, hi = ts[:-1], ts[1:]
    mids = np.asarray(s.p)[None, :] + ((lo + hi) / 2)[:, None] * s.direction[None, :]
    inside = classify(domain, mids) != OUTSIDE_CODE
    # sub-tolerance slivers between two breakpoints count as touching
    inside |= (hi - lo) * s.length <= domain.tolerance
    return [(float(a), float(b), bool(c)) for a, b, c in zip(lo, hi, inside)]


def segment_admissible(domain: Domain, s: Segment) -> bool:
    """True iff the closed segment lies in the closed domain"""
    ends = classify(domain, [s.p, s.q])
    if np.any(ends == OUTSIDE_CODE):
        return False
    return all(inside for _, _, inside in _inside_intervals(domain, s))


def clip_to_domain(domain: Domain, s: Segment) -> List[Segment]:
    """Maximal closed sub-segments of s inside the closed domain, ordered along s"""
    pieces: List[List[float]] = []
    for lo, hi, inside in _inside_intervals(domain, s):
        if not inside:
            continue
        if pieces and abs(pieces[-1][1] - lo) <= 1e-15:
            pieces[-1][1] = hi
        else:
            pieces.append([lo, hi])

    components = []
    for lo, hi in pieces:
        if (hi - lo) * s.length <= domain.tolerance:
            continue
        components.append(Segment(s.point_at(lo), s.point_at(hi)))
    return components


def arclength_of(domain: Domain, x) -> float:
    """Arc-length parameter of a boundary point"""
    proj = boundary_projection(domain, x)
    if proj.distance > domain.tolerance:
        raise DomainError(
            f"Point {tuple(np.asarray(x, dtype=float))} is {proj.distance:.3g} away from the boundary",
            error_code="geom.NOT_ON_BOUNDARY"
        )
    return proj.arclength


def boundary_geodesic(domain: Domain, x, y) -> float:
    """Shorter arc length between two boundary points"""
    arc = abs(arclength_of(domain, x) - arclength_of(domain, y))
    return min(arc, domain.perimeter - arc)


def chord_arc_constant(domain: Domain, samples: int = 256) -> float:
    """Sampled max of boundary_geodesic(x, y) / |x − y| over boundary pairs"""
    s = np.linspace(0.0, domain.perimeter, samples, endpoint=False)
    pts = np.array([domain.point_at_arclength(v) for v in s])
    arc = np.abs(s[:, None] - s[None, :])
    arc = np.minimum(arc, domain.perimeter - arc)
    chord = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    off = ~np.eye(samples, dtype=bool)
    return float((arc[off] / chord[off]).max())


def points_inside(domain: Domain, points: Sequence[Point]) -> bool:
    return bool(np.all(classify(domain, points) == INSIDE_CODE))
