"""
Decomposition of lattice edge sets into closed curves and contact-to-contact arcs
on the dual (plaquette) graph, and the arc taxonomy relative to the cuts.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from src.connection.base import Connection
from src.core.exceptions import MalformedInputError
from src.core.schemas.enums import ArcClass, ContactKind, EndpointKind
from src.geom.constants import BOUNDARY_CODE
from src.geom.predicates import classify
from src.lifting.grid import HORIZONTAL, EdgeSet, LatticeGrid, edge_plaquettes
from src.lifting.rasterize import segment_band

logger = logging.getLogger(__name__)

Plaquette = Tuple[int, int]
Edge = Tuple[int, int, int]


@dataclass(frozen=True)
class ContactTag:
    kind: ContactKind
    plaquette: Plaquette
    segments: FrozenSet[int] = frozenset()


@dataclass
class EdgePath:
    """Edges of a dual walk, with the plaquettes it visits"""
    edges: List[Edge]
    vertices: List[Plaquette]
    h: float
    start: Optional[ContactTag] = None
    end: Optional[ContactTag] = None

    @property
    def closed(self) -> bool:
        return self.start is None

    @property
    def length(self) -> float:
        return self.h * len(self.edges)


@dataclass
class ContactMap:
    """Contact tags for plaquettes of one lattice"""
    grid: LatticeGrid
    tags: Dict[Plaquette, ContactTag] = field(default_factory=dict)

    def tag(self, plaquette: Plaquette) -> Optional[ContactTag]:
        j, i = plaquette
        ny, nx = self.grid.plaquette_shape
        if not (0 <= j < ny and 0 <= i < nx) or not self.grid.plaquettes_inside[j, i]:
            return ContactTag(ContactKind.BOUNDARY_CONTACT, plaquette)
        return self.tags.get(plaquette)


def contact_map(grid: LatticeGrid, cuts: Optional[Connection] = None, defects: Sequence[Plaquette] = ()) -> ContactMap:
    """Defect cells at cut points and given plaquettes; cut contacts along each segment band"""
    contacts = ContactMap(grid)
    if cuts is not None:
        touching: Dict[Plaquette, set] = defaultdict(set)
        for k, s in enumerate(cuts.segments):
            for edge in segment_band(grid, s.segment).restricted():
                for p in edge_plaquettes(edge):
                    touching[p].add(k)
        for p, segs in touching.items():
            contacts.tags[p] = ContactTag(ContactKind.CUT_CONTACT, p, frozenset(segs))

        incident: Dict[int, set] = defaultdict(set)
        for k, s in enumerate(cuts.segments):
            for idx in s.point_indices():
                incident[idx].add(k)
        for idx, point in enumerate(cuts.points):
            p = grid.nearest_plaquette(point)
            contacts.tags[p] = ContactTag(ContactKind.DEFECT_CELL, p, frozenset(incident[idx]))

    for p in defects:
        p = (int(p[0]), int(p[1]))
        if p not in contacts.tags or contacts.tags[p].kind != ContactKind.DEFECT_CELL:
            contacts.tags[p] = ContactTag(ContactKind.DEFECT_CELL, p)
    return contacts


def _side(edge: Edge, plaquette: Plaquette) -> str:
    kind, j, i = edge
    if kind == HORIZONTAL:
        return "bottom" if j == plaquette[0] else "top"
    return "left" if i == plaquette[1] else "right"


PAIRED_SIDE = {"bottom": "left", "left": "bottom", "top": "right", "right": "top"}


def jordan_decompose(
    edges: EdgeSet,
    contacts: Optional[ContactMap] = None,
) -> Tuple[List[EdgePath], List[EdgePath]]:
    """Split an edge set into closed dual cycles and maximal arcs between contact plaquettes.

    Non-contact plaquettes of degree four join bottom with left and top with right.
    """
    grid = edges.grid
    contacts = ContactMap(grid) if contacts is None else contacts
    edge_list = list(edges)
    ends = [edge_plaquettes(e) for e in edge_list]

    incident: Dict[Plaquette, List[int]] = defaultdict(list)
    for k, (a, b) in enumerate(ends):
        incident[a].append(k)
        incident[b].append(k)

    tags = {p: contacts.tag(p) for p in incident}
    for p, ks in incident.items():
        if len(ks) % 2 == 1 and tags[p] is None:
            raise MalformedInputError(f"Plaquette {p} has odd degree {len(ks)} and no contact tag")

    def other(k: int, p: Plaquette) -> Plaquette:
        a, b = ends[k]
        return b if a == p else a

    def partner(k: int, p: Plaquette) -> int:
        rest = [m for m in incident[p] if m != k]
        if len(rest) == 1:
            return rest[0]
        want = PAIRED_SIDE[_side(edge_list[k], p)]
        return next(m for m in rest if _side(edge_list[m], p) == want)

    used = set()
    arcs: List[EdgePath] = []
    for p in sorted(incident):
        if tags[p] is None:
            continue
        for k0 in incident[p]:
            if k0 in used:
                continue
            path_edges, path_vertices = [], [p]
            k, cur = k0, p
            while True:
                used.add(k)
                path_edges.append(edge_list[k])
                cur = other(k, cur)
                path_vertices.append(cur)
                if tags[cur] is not None:
                    break
                k = partner(k, cur)
            arcs.append(EdgePath(path_edges, path_vertices, grid.h, tags[p], tags[cur]))

    loops: List[EdgePath] = []
    for k0 in range(len(edge_list)):
        if k0 in used:
            continue
        start = ends[k0][0]
        path_edges, path_vertices = [], [start]
        k, cur = k0, start
        while True:
            used.add(k)
            path_edges.append(edge_list[k])
            cur = other(k, cur)
            path_vertices.append(cur)
            k = partner(k, cur)
            if k == k0:
                break
            if k in used:
                raise MalformedInputError(f"Dual walk revisits an edge at plaquette {cur}")
        loops.append(EdgePath(path_edges, path_vertices, grid.h))

    logger.debug(f"Decomposed {len(edge_list)} edges into {len(loops)} loops and {len(arcs)} arcs")
    return loops, arcs


def _boundary_segments(cuts: Connection) -> FrozenSet[int]:
    return frozenset(
        k for k, s in enumerate(cuts.segments)
        if EndpointKind.BOUNDARY_FOOT in (s.start.kind, s.end.kind)
    )


def classify_arcs(arcs: Sequence[EdgePath], cuts: Connection, domain=None) -> List[ArcClass]:
    """Essential (a)/(b) or non-essential (i)–(iv) label for each path"""
    touching = set(_boundary_segments(cuts))
    if domain is not None:
        for k, s in enumerate(cuts.segments):
            if BOUNDARY_CODE in classify(domain, [s.segment.p, s.segment.q]):
                touching.add(k)

    labels: List[ArcClass] = []
    for arc in arcs:
        if arc.closed:
            labels.append(ArcClass.CLOSED)
            continue
        a, b = arc.start, arc.end
        a_bd = a.kind == ContactKind.BOUNDARY_CONTACT
        b_bd = b.kind == ContactKind.BOUNDARY_CONTACT
        if a_bd and b_bd:
            labels.append(ArcClass.BOUNDARY_TO_BOUNDARY)
        elif not a_bd and not b_bd:
            if a.segments & b.segments:
                labels.append(ArcClass.SAME_SEGMENT)
            else:
                labels.append(ArcClass.ESSENTIAL_A)
        else:
            cut = b if a_bd else a
            if cut.segments & touching:
                labels.append(ArcClass.BOUNDARY_TOUCHING_SEGMENT)
            else:
                labels.append(ArcClass.ESSENTIAL_B)
    return labels


def arc_class_counts(labels: Sequence[ArcClass]) -> Dict[str, int]:
    counts = Counter(label.value for label in labels)
    return {c.value: counts.get(c.value, 0) for c in ArcClass}
