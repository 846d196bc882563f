"""
Magnetization walls: the lattice edges where u₁ changes sign inside its low valley
"""
import logging
from dataclasses import dataclass, field
from typing import List, Tuple, Union

import networkx as nx
import numpy as np

from src.ferrosim.decouple import DecoupledReport, WallProfileVar, wall_profile
from src.ferrosim.params import Params
from src.ferrosim.state import State
from src.lifting.audit import trail_polyline_length
from src.lifting.grid import EdgeSet, GridField, edge_plaquettes
from src.lifting.trails import Trail, euler_trails

logger = logging.getLogger(__name__)

WallSource = Union[State, DecoupledReport, WallProfileVar, GridField]


@dataclass
class WallReport:
    edges: EdgeSet
    polylines: List[np.ndarray] = field(default_factory=list)
    lengths: List[float] = field(default_factory=list)
    closed: List[bool] = field(default_factory=list)

    @property
    def total_length(self) -> float:
        return float(sum(self.lengths))

    @property
    def endpoints(self) -> List[Tuple[Tuple[float, float], Tuple[float, float]]]:
        return [(tuple(p[0]), tuple(p[-1])) for p, c in zip(self.polylines, self.closed) if not c]

    def __len__(self) -> int:
        return len(self.polylines)


def _profile_of(source: WallSource) -> WallProfileVar:
    if isinstance(source, WallProfileVar):
        return source
    if isinstance(source, DecoupledReport):
        return source.profile
    if isinstance(source, State):
        return wall_profile(source)
    grid = source.grid
    return WallProfileVar(u=source, frame=None, region=grid.mask.copy(), frame_cuts=EdgeSet.empty(grid))


def wall_edges(profile: WallProfileVar, lam: float) -> EdgeSet:
    """Edges where the frame-corrected u₁ changes sign with |u₁| < λ/2 at both ends"""
    grid = profile.u.grid
    u1 = profile.u.values[..., 0]
    low = profile.region & (np.abs(u1) < 0.5 * lam)
    sh = np.where(profile.frame_cuts.horizontal, -1.0, 1.0)
    sv = np.where(profile.frame_cuts.vertical, -1.0, 1.0)
    horizontal = (u1[:, :-1] * sh * u1[:, 1:] < 0) & low[:, :-1] & low[:, 1:]
    vertical = (u1[:-1, :] * sv * u1[1:, :] < 0) & low[:-1, :] & low[1:, :]
    return EdgeSet(grid, horizontal, vertical)


def _polyline(grid, trail: Trail) -> np.ndarray:
    js = np.array([n[0] for n in trail.nodes])
    is_ = np.array([n[1] for n in trail.nodes])
    x, y = grid.plaquette_center(js, is_)
    return np.stack([x, y], axis=1)


def detect_wall(source: WallSource, params: Params) -> WallReport:
    """Chain the wall edges through the dual lattice into polylines"""
    profile = _profile_of(source)
    grid = profile.u.grid
    edges = wall_edges(profile, params.lam)

    graph = nx.MultiGraph()
    for edge in edges:
        a, b = edge_plaquettes(edge)
        graph.add_edge(a, b, edge=edge)
    partition = euler_trails(graph)

    report = WallReport(edges=edges)
    for trail in partition.trails + partition.closed:
        report.polylines.append(_polyline(grid, trail))
        report.lengths.append(trail_polyline_length(grid, trail))
        report.closed.append(trail.closed)
    logger.info(f"Detected {len(report)} wall pieces of total length {report.total_length:.4g}")
    return report
