"""
Windings of q-fields on lattice loops and plaquettes, and defect detection
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy import ndimage

from src.core.config import settings
from src.core.exceptions import ResolutionError
from src.lifting.grid import GridField, LatticeGrid

logger = logging.getLogger(__name__)

RESOLUTION_LIMIT = math.pi / 2
WEAK_NORM = 0.5


def wrap_angle(d: np.ndarray) -> np.ndarray:
    """Principal branch in [−π, π)"""
    return (np.asarray(d) + math.pi) % (2 * math.pi) - math.pi


def winding_of_values(values, resolve: bool = True) -> Tuple[int, bool]:
    """Winding number of a closed sequence of q-vectors (last value joins the first)"""
    values = np.asarray(values, dtype=float)
    theta = np.arctan2(values[:, 1], values[:, 0])
    steps = wrap_angle(np.roll(theta, -1) - theta)
    if resolve:
        bad = np.flatnonzero(np.abs(steps) >= RESOLUTION_LIMIT)
        if bad.size:
            k = int(bad[0])
            raise ResolutionError(float(abs(steps[k])), k)
    winding = int(np.rint(steps.sum() / (2 * math.pi)))
    return winding, winding % 2 == 0


def loop_parity(field: GridField, loop: Sequence[Tuple[int, int]]) -> Tuple[int, bool]:
    """Winding and orientability of a unit q-field along a cyclic node sequence"""
    idx = np.asarray(loop, dtype=int)
    return winding_of_values(field.values[idx[:, 0], idx[:, 1]])


def edge_increments(field: GridField) -> Tuple[np.ndarray, np.ndarray]:
    """Wrapped angle increments of q along horizontal and vertical edges"""
    theta = np.arctan2(field.values[..., 1], field.values[..., 0])
    return wrap_angle(np.diff(theta, axis=1)), wrap_angle(np.diff(theta, axis=0))


def plaquette_windings(field: GridField) -> Tuple[np.ndarray, np.ndarray]:
    """Per-plaquette winding and largest absolute angle step, counter-clockwise"""
    dh, dv = edge_increments(field)
    total = dh[:-1, :] + dv[:, 1:] - dh[1:, :] - dv[:, :-1]
    steps = np.maximum.reduce([np.abs(dh[:-1, :]), np.abs(dv[:, 1:]), np.abs(dh[1:, :]), np.abs(dv[:, :-1])])
    return np.rint(total / (2 * math.pi)).astype(int), steps


def oriented_boundary(region: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Signs (+1, −1, 0) of horizontal and vertical edges on the boundary of a plaquette region,
    oriented with the region on the left.
    """
    region = np.asarray(region, dtype=bool)
    rows = np.pad(region, ((1, 1), (0, 0)))
    above, below = rows[1:], rows[:-1]
    cols = np.pad(region, ((0, 0), (1, 1)))
    right, left = cols[:, 1:], cols[:, :-1]
    horizontal = above.astype(int) - below.astype(int)
    vertical = left.astype(int) - right.astype(int)
    return horizontal, vertical


def boundary_winding(field: GridField) -> int:
    """Winding of q along the outer contour of the in-domain plaquettes"""
    dh, dv = edge_increments(field)
    sh, sv = oriented_boundary(field.grid.plaquettes_inside)
    return int(np.rint(((sh * dh).sum() + (sv * dv).sum()) / (2 * math.pi)))


@dataclass
class Singularity:
    center: Tuple[float, float]
    plaquette: Tuple[int, int]
    winding: int
    plaquettes: List[Tuple[int, int]] = field(default_factory=list)
    touches_boundary: bool = False

    @property
    def orientable(self) -> bool:
        return self.winding % 2 == 0


@dataclass
class SingularityReport:
    defects: List[Singularity] = field(default_factory=list)
    flagged: List[Singularity] = field(default_factory=list)

    @property
    def total_winding(self) -> int:
        return sum(d.winding for d in self.defects)

    @property
    def non_orientable(self) -> List[Singularity]:
        return [d for d in self.defects if not d.orientable]

    @property
    def orientable(self) -> List[Singularity]:
        return [d for d in self.defects if d.orientable]

    def centers(self) -> List[Tuple[float, float]]:
        return [d.center for d in self.defects]

    def __len__(self) -> int:
        return len(self.defects)


def detect_singularities(field: GridField, padding: int = None) -> SingularityReport:
    """Group non-zero, unresolved or weak plaquettes into isolated defects.

    Each group is grown by `padding` plaquettes; its winding is the sum of the
    plaquette windings inside, which equals the winding along the grown contour.
    """
    pad = settings.defect_padding if padding is None else padding
    grid = field.grid
    inside = grid.plaquettes_inside
    winding, steps = plaquette_windings(field)

    norms = field.norm()
    weak_nodes = norms < WEAK_NORM
    weak = weak_nodes[:-1, :-1] | weak_nodes[:-1, 1:] | weak_nodes[1:, :-1] | weak_nodes[1:, 1:]

    marked = inside & ((winding != 0) | weak)
    candidates = marked | (inside & (steps >= RESOLUTION_LIMIT))

    grown = ndimage.binary_dilation(
        np.pad(candidates, pad), structure=np.ones((3, 3), dtype=bool), iterations=pad
    )
    outside = ~np.pad(inside, pad, constant_values=False)
    labels, count = ndimage.label(grown, structure=np.ones((3, 3), dtype=bool))

    report = SingularityReport()
    for k in range(1, count + 1):
        region = labels == k
        core = region[pad:-pad, pad:-pad] & inside
        if not np.any(core & marked):
            continue
        total = int(winding[core].sum())
        touches = bool(np.any(region & outside))
        if total == 0 and not touches:
            continue

        js, is_ = np.nonzero(core & candidates)
        weights = np.abs(winding[js, is_]).astype(float)
        if weights.sum() == 0:
            weights = np.ones_like(weights)
        cx, cy = grid.plaquette_center(js, is_)
        center = (float(np.average(cx, weights=weights)), float(np.average(cy, weights=weights)))
        defect = Singularity(
            center=center,
            plaquette=grid.nearest_plaquette(center),
            winding=total,
            plaquettes=[(int(j), int(i)) for j, i in zip(js, is_)],
            touches_boundary=touches,
        )
        if touches:
            logger.warning(f"Defect near {center} touches the mask boundary; not aggregated")
            report.flagged.append(defect)
        else:
            report.defects.append(defect)

    report.defects.sort(key=lambda d: (d.center[0], d.center[1]))
    logger.debug(
        f"Detected {len(report.defects)} defects, {len(report.flagged)} flagged",
        extra={"total_winding": report.total_winding}
    )
    return report


def core_nodes(grid: LatticeGrid, plaquettes: Sequence[Tuple[int, int]], half_width: int = None) -> np.ndarray:
    """Node mask of the (2w)×(2w) blocks centred on the given plaquettes"""
    w = settings.core_half_width if half_width is None else half_width
    ny, nx = grid.shape
    out = np.zeros(grid.shape, dtype=bool)
    for j, i in plaquettes:
        out[max(j - w + 1, 0):max(min(j + w + 1, ny), 0), max(i - w + 1, 0):max(min(i + w + 1, nx), 0)] = True
    return out
