"""
Liftings of unit q-fields to director fields and their link to pixel sets
"""
import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

import networkx as nx
import numpy as np

from src.connection.base import Connection
from src.core.exceptions import InconsistencyError, MismatchError
from src.core.schemas.enums import CorrespondenceDirection
from src.cover.double_cover import directors_of_tensor, pairing_xi
from src.lifting.grid import EdgeSet, GridField, LatticeGrid, PixelSet
from src.lifting.rasterize import cut_band
from src.lifting.winding import SingularityReport, core_nodes, detect_singularities, plaquette_windings

logger = logging.getLogger(__name__)

MISMATCH_LEVEL = 0.5


@dataclass
class LiftingResult:
    """Director field with its jump edges; unpacks as (lifting, jumps)"""
    lifting: GridField
    jumps: EdgeSet
    band: EdgeSet
    core: np.ndarray
    report: SingularityReport

    def __iter__(self) -> Iterator:
        yield self.lifting
        yield self.jumps

    def core_edges(self) -> EdgeSet:
        return core_edges(self.lifting.grid, self.core)


def core_edges(grid: LatticeGrid, core: np.ndarray) -> EdgeSet:
    """In-domain edges with at least one endpoint in a defect core"""
    return EdgeSet(grid, core[:, :-1] | core[:, 1:], core[:-1, :] | core[1:, :]).restricted()


def unit_q(field: GridField) -> np.ndarray:
    """q/|q| at mask nodes, (1, 0) where q vanishes or outside the mask"""
    values = field.values
    norms = field.norm()
    safe = np.where(norms > 0, norms, 1.0)
    out = values / safe[..., None]
    out[(norms == 0) | ~field.grid.mask] = (1.0, 0.0)
    return out


def edge_signs(grid: LatticeGrid, v: np.ndarray) -> EdgeSet:
    """In-domain edges across which v·v < 0"""
    horizontal = ((v[:, :-1] * v[:, 1:]).sum(axis=-1) < 0) & grid.horizontal_valid
    vertical = ((v[:-1, :] * v[1:, :]).sum(axis=-1) < 0) & grid.vertical_valid
    return EdgeSet(grid, horizontal, vertical)


def parity_mismatch(field: GridField, band: EdgeSet) -> np.ndarray:
    """Inside plaquettes whose winding parity differs from their band degree parity"""
    winding, _ = plaquette_windings(GridField(field.grid, unit_q(field)))
    bh, bv = band.horizontal.astype(int), band.vertical.astype(int)
    degree = bh[:-1, :] + bh[1:, :] + bv[:, :-1] + bv[:, 1:]
    return field.grid.plaquettes_inside & ((winding + degree) % 2 == 1)


def _traversal_graph(grid: LatticeGrid, band: EdgeSet) -> nx.Graph:
    ny, nx_ = grid.shape
    graph = nx.Graph()
    graph.add_nodes_from(np.flatnonzero(grid.mask.ravel()).tolist())
    keep = EdgeSet(grid, grid.horizontal_valid, grid.vertical_valid) - band
    jh, ih = np.nonzero(keep.horizontal)
    a = jh * nx_ + ih
    graph.add_edges_from(zip(a.tolist(), (a + 1).tolist()))
    jv, iv = np.nonzero(keep.vertical)
    a = jv * nx_ + iv
    graph.add_edges_from(zip(a.tolist(), (a + nx_).tolist()))
    return graph


def continue_directors(grid: LatticeGrid, q: np.ndarray, band: EdgeSet) -> np.ndarray:
    """Breadth-first half-angle continuation on the lattice with the band removed"""
    first, _ = directors_of_tensor(q)
    flat = first.reshape(-1, 2)
    dirs = flat.tolist()
    sign = np.ones(len(flat))
    graph = _traversal_graph(grid, band)

    components = sorted((min(c) for c in nx.connected_components(graph)))
    if len(components) > 1:
        logger.info(f"Cut lattice has {len(components)} components; each gets its own root")
    for root in components:
        for a, b in nx.bfs_edges(graph, root):
            da, db = dirs[a], dirs[b]
            dot = da[0] * db[0] + da[1] * db[1]
            sign[b] = sign[a] if dot >= 0 else -sign[a]

    v = flat * sign[:, None]
    v = v.reshape(grid.shape + (2,))
    v[~grid.mask] = 0.0
    return v


def construct_lifting(
    field: GridField,
    cuts: Connection,
    report: Optional[SingularityReport] = None,
) -> LiftingResult:
    """Lift a unit q-field to directors that jump only across the rasterized cuts"""
    grid = field.grid
    report = detect_singularities(field) if report is None else report
    band = cut_band(grid, cuts)

    centers: List[Tuple[int, int]] = [d.plaquette for d in report.defects + report.flagged]
    centers += [grid.nearest_plaquette(p) for p in cuts.points]
    core = core_nodes(grid, centers)
    for d in report.defects + report.flagged:
        for j, i in d.plaquettes:
            core[j:j + 2, i:i + 2] = True
    core &= grid.mask

    near_core = core[:-1, :-1] | core[:-1, 1:] | core[1:, :-1] | core[1:, 1:]
    offending = parity_mismatch(field, band) & ~near_core
    if np.any(offending):
        j, i = (int(k) for k in np.argwhere(offending)[0])
        raise InconsistencyError(
            f"Cuts do not match the defect parity at {int(offending.sum())} plaquettes",
            witness=(j, i),
        )

    q = unit_q(field)
    v = continue_directors(grid, q, band)
    lifting = GridField(grid, v)
    jumps = edge_signs(grid, v)

    stray = jumps - band - core_edges(grid, core)
    if not stray.is_empty():
        kind, j, i = next(iter(stray))
        witness = (j, i) if (j < grid.shape[0] - 1 and i < grid.shape[1] - 1) else (max(j - 1, 0), max(i - 1, 0))
        raise InconsistencyError(f"{len(stray)} jump edges lie off the cut band", witness=witness)

    logger.debug(
        f"Lifting built: {len(jumps)} jump edges, band {len(band)} edges",
        extra={"defects": len(report.defects), "core_nodes": int(core.sum())}
    )
    return LiftingResult(lifting=lifting, jumps=jumps, band=band, core=core, report=report)


def lifting_set_correspondence(
    direction: CorrespondenceDirection,
    field: GridField,
    cuts: Connection,
    X: Union[PixelSet, GridField],
    reference: Optional[LiftingResult] = None,
) -> Union[LiftingResult, PixelSet]:
    """Set → lifting flips the reference lifting on A; lifting → set returns {Ξ(v, v⋆) < 0}"""
    ref = construct_lifting(field, cuts) if reference is None else reference
    grid = field.grid
    v_star = ref.lifting.values

    if CorrespondenceDirection(direction) == CorrespondenceDirection.SET_TO_LIFTING:
        cells = X.cells
        v = np.where(cells[..., None], -v_star, v_star)
        jumps = edge_signs(grid, v)
        return LiftingResult(
            lifting=GridField(grid, v), jumps=jumps, band=ref.band, core=ref.core, report=ref.report
        )

    v = X.values
    mask = grid.mask
    xi = pairing_xi(v[mask], v_star[mask])
    weak = np.abs(xi) < MISMATCH_LEVEL
    if np.any(weak):
        raise MismatchError(f"Director field does not cover the reference field at {int(weak.sum())} nodes")
    cells = np.zeros(grid.shape, dtype=bool)
    cells[mask] = xi < 0
    return PixelSet(grid, cells)


def deck_ambiguity(v1: GridField, v2: GridField, jumps: EdgeSet) -> bool:
    """True iff v1 = ±v2 with one sign per component of the jump-free lattice"""
    grid = v1.grid
    mask = grid.mask
    xi = pairing_xi(v1.values[mask], v2.values[mask])
    if np.any(np.abs(xi) < MISMATCH_LEVEL):
        return False
    sign = np.zeros(grid.shape)
    sign[mask] = np.sign(xi)

    graph = _traversal_graph(grid, jumps)
    flat = sign.ravel()
    for component in nx.connected_components(graph):
        values = flat[list(component)]
        if np.any(values != values[0]):
            return False
    return True
