"""
Lattice check of the lower bound length(𝕃_A) ≥ 𝕃^Ω and its Monte-Carlo audit
"""
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from src.connection.base import Connection
from src.connection.solver import solve_min_connection
from src.core.config import settings
from src.core.random import task_seeds
from src.core.schemas.enums import ContactKind
from src.geom.domain import Domain, Point
from src.lifting.grid import EdgeSet, LatticeGrid, PixelSet, edge_plaquettes
from src.lifting.jordan import ContactMap, arc_class_counts, classify_arcs, contact_map, jordan_decompose
from src.lifting.perimeter import essential_boundary, la_edge_set
from src.lifting.trails import Trail, TrailPartition, euler_trails
from src.workers.pool import run_parallel

logger = logging.getLogger(__name__)

Plaquette = Tuple[int, int]


@dataclass
class LowerBoundReport:
    la_length: float
    l_omega: float
    allowance: float
    passed: bool
    corrected_length: float = 0.0
    corrected_tolerance: float = 0.0
    corrected_passed: bool = True
    traces_connection: bool = False
    loops: int = 0
    arcs: int = 0
    arc_classes: Dict[str, int] = field(default_factory=dict)
    trails: int = 0
    closed_trails: int = 0
    discarded_trails: int = 0
    seed: Optional[int] = None

    @property
    def margin(self) -> float:
        return self.la_length - (self.l_omega - self.allowance)

    def to_dict(self) -> Dict:
        out = asdict(self)
        out["margin"] = self.margin
        return out


@dataclass
class AuditSummary:
    samples: int
    passed: int
    min_margin: float
    failures: List[int] = field(default_factory=list)
    reports: List[LowerBoundReport] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.passed == self.samples


def dual_graph(edges: EdgeSet, contacts: ContactMap) -> Tuple[nx.MultiGraph, Set[Plaquette]]:
    """Plaquette multigraph of an edge set and its out-of-domain vertices"""
    graph = nx.MultiGraph()
    boundary: Set[Plaquette] = set()
    for edge in edges:
        a, b = edge_plaquettes(edge)
        graph.add_edge(a, b, edge=edge)
        for p in (a, b):
            tag = contacts.tag(p)
            if tag is not None and tag.kind == ContactKind.BOUNDARY_CONTACT:
                boundary.add(p)
    return graph, boundary


def trail_polyline_length(grid: LatticeGrid, trail: Trail, every: int = None) -> float:
    """Euclidean length of the trail's plaquette-centre polyline, keeping every k-th vertex"""
    step = settings.trail_subsample if every is None else every
    nodes = trail.nodes[::step]
    if trail.nodes[-1] != nodes[-1] or len(nodes) == 1:
        nodes = nodes + [trail.nodes[-1]]
    js = np.array([n[0] for n in nodes])
    is_ = np.array([n[1] for n in nodes])
    x, y = grid.plaquette_center(js, is_)
    return float(np.hypot(np.diff(x), np.diff(y)).sum())


def traces_connection(partition: TrailPartition, defects: Set[Plaquette], boundary: Set[Plaquette]) -> bool:
    """Every trail ends at a defect (other end a defect or ∂Ω); every defect ends an odd number"""
    counts = {d: 0 for d in defects}
    for trail in partition.trails:
        a, b = trail.endpoints
        if a not in defects and b not in defects:
            return False
        for p in (a, b):
            if p in defects:
                counts[p] += 1
            elif p not in boundary:
                return False
    return all(n % 2 == 1 for n in counts.values())


def verify_lower_bound(
    domain: Domain,
    points: Sequence[Point],
    A: PixelSet,
    cuts: Connection,
    allowance: float = None,
) -> LowerBoundReport:
    """Compare the lattice length of ∂A △ cuts with the minimal connection length"""
    grid = A.grid
    kappa = settings.rasterization_allowance if allowance is None else allowance
    la = la_edge_set(A, cuts)
    l_omega = cuts.total_length
    slack = kappa * grid.h

    contacts = contact_map(grid, cuts)
    loops, arcs = jordan_decompose(essential_boundary(A), contacts)
    labels = classify_arcs(loops + arcs, cuts, domain)

    graph, boundary = dual_graph(la, contacts)
    partition = euler_trails(graph, boundary)
    defects = {grid.nearest_plaquette(p) for p in points}

    corrected = sum(trail_polyline_length(grid, t) for t in partition.trails)
    tolerance = 2 * grid.h * max(len(partition.trails), 1)

    return LowerBoundReport(
        la_length=la.length,
        l_omega=l_omega,
        allowance=slack,
        passed=la.length >= l_omega - slack,
        corrected_length=corrected,
        corrected_tolerance=tolerance,
        corrected_passed=corrected >= l_omega - tolerance,
        traces_connection=traces_connection(partition, defects, boundary),
        loops=len(loops),
        arcs=len(arcs),
        arc_classes=arc_class_counts(labels),
        trails=len(partition.trails),
        closed_trails=len(partition.closed),
        discarded_trails=len(partition.discarded),
    )


def random_pixel_set(grid: LatticeGrid, rng: np.random.Generator, max_shapes: int = 4) -> PixelSet:
    """Union of random discs and axis-aligned rectangles"""
    X, Y = grid.coordinates()
    xs, ys = X[grid.mask], Y[grid.mask]
    xmin, xmax, ymin, ymax = xs.min(), xs.max(), ys.min(), ys.max()
    size = 0.5 * max(xmax - xmin, ymax - ymin)

    cells = np.zeros(grid.shape, dtype=bool)
    for _ in range(int(rng.integers(1, max_shapes + 1))):
        cx, cy = rng.uniform(xmin, xmax), rng.uniform(ymin, ymax)
        if rng.random() < 0.5:
            r = rng.uniform(0.05, 0.5) * size
            cells |= (X - cx) ** 2 + (Y - cy) ** 2 <= r ** 2
        else:
            wx, wy = rng.uniform(0.05, 0.5, size=2) * size
            cells |= (np.abs(X - cx) <= wx) & (np.abs(Y - cy) <= wy)
    return PixelSet(grid, cells)


def lower_bound_sample(domain: Domain, points, grid: LatticeGrid, cuts: Connection, seed: int) -> LowerBoundReport:
    """One audit sample: a random set drawn from its own seed"""
    A = random_pixel_set(grid, np.random.default_rng(seed))
    report = verify_lower_bound(domain, points, A, cuts)
    report.seed = seed
    return report


def audit_lower_bound(
    domain: Domain,
    points: Sequence[Point],
    samples: int,
    seed: int,
    grid_n: int = 128,
    cuts: Optional[Connection] = None,
    n_jobs: int = None,
) -> AuditSummary:
    """verify_lower_bound on `samples` random sets, fanned out over the worker pool"""
    grid = LatticeGrid.for_domain(domain, n=grid_n)
    cuts = solve_min_connection(domain, points) if cuts is None else cuts
    seeds = task_seeds(seed, "audit-lower-bound", samples)

    logger.info(
        f"Auditing the lower bound on {samples} random sets",
        extra={"domain": domain.name, "points": len(points), "seed": seed}
    )
    reports = run_parallel(
        lower_bound_sample,
        [(domain, points, grid, cuts, s) for s in seeds],
        n_jobs=n_jobs,
        desc="lower-bound audit",
    )

    failures = [k for k, r in enumerate(reports) if not r.passed]
    summary = AuditSummary(
        samples=samples,
        passed=samples - len(failures),
        min_margin=min((r.margin for r in reports), default=float("inf")),
        failures=failures,
        reports=reports,
    )
    if failures:
        logger.warning(f"Lower bound failed on {len(failures)} of {samples} samples")
    else:
        logger.info(f"Lower bound held on all {samples} samples (min margin {summary.min_margin:.4g})")
    return summary
