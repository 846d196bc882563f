"""
Rasterization of cut segments to lattice edge bands
"""
import logging
import math

import numpy as np

from src.connection.base import Connection
from src.geom.domain import Segment
from src.lifting.grid import EdgeSet, LatticeGrid

logger = logging.getLogger(__name__)

# Nodes are displaced by (δ, φδ), δ = NUDGE·h, so no segment passes through a node
# or runs along a lattice line.
NUDGE = 1e-7
PHI = (math.sqrt(5.0) - 1.0) / 2.0


def segment_band(grid: LatticeGrid, segment: Segment) -> EdgeSet:
    """Edges whose node-to-node carrier is crossed by the segment"""
    band = EdgeSet.empty(grid)
    ny, nx = grid.shape
    h = grid.h
    dx, dy = NUDGE * h, PHI * NUDGE * h
    (px, py), (qx, qy) = segment.p, segment.q

    # horizontal edges lie on rows y = y_j (+dy)
    if py != qy:
        rows = grid.ys + dy
        lo, hi = min(py, qy), max(py, qy)
        js = np.flatnonzero((rows > lo) & (rows < hi))
        if js.size:
            t = (rows[js] - py) / (qy - py)
            x = px + t * (qx - px)
            i = np.floor((x - grid.origin[0] - dx) / h).astype(int)
            ok = (i >= 0) & (i < nx - 1)
            band.horizontal[js[ok], i[ok]] = True

    # vertical edges lie on columns x = x_i (+dx)
    if px != qx:
        cols = grid.xs + dx
        lo, hi = min(px, qx), max(px, qx)
        is_ = np.flatnonzero((cols > lo) & (cols < hi))
        if is_.size:
            t = (cols[is_] - px) / (qx - px)
            y = py + t * (qy - py)
            j = np.floor((y - grid.origin[1] - dy) / h).astype(int)
            ok = (j >= 0) & (j < ny - 1)
            band.vertical[j[ok], is_[ok]] = True

    return band


def cut_band(grid: LatticeGrid, cuts: Connection) -> EdgeSet:
    """Mod-2 union of the segment bands, restricted to in-domain edges"""
    band = EdgeSet.empty(grid)
    for s in cuts.segments:
        band = band ^ segment_band(grid, s.segment)
    band = band.restricted()
    logger.debug(f"Cut band of {len(cuts.segments)} segments has {len(band)} edges")
    return band
