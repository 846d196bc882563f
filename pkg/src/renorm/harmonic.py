"""
Canonical harmonic maps with prescribed point vortices.

q* = ∏ⱼ ((z − aⱼ)/|z − aⱼ|)^σ · e^{iH}, σ = ±1, with H the discrete harmonic
function whose boundary values make q* match the datum on the lattice boundary.
The singular factor is kept in closed form so its gradient is exact.
"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.sparse.linalg import factorized

from src.core.exceptions import UsageError, WindingMismatchError
from src.ferrosim.state import BoundaryDatum
from src.geom.domain import Domain, Point
from src.geom.predicates import boundary_distance, nearest_arclength, points_inside
from src.lifting.grid import GridField, LatticeGrid
from src.lifting.winding import wrap_angle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VortexConfig:
    """2|d| distinct interior points, all of q-degree `sign`"""
    points: Tuple[Point, ...]
    sign: int = 1

    def __post_init__(self):
        pts = tuple((float(x), float(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if self.sign not in (1, -1):
            raise UsageError(f"degree sign must be ±1, got {self.sign}", field="sign")
        if len(set(pts)) != len(pts):
            raise UsageError("vortex points must be distinct", field="points")

    @classmethod
    def for_degree(cls, points: Sequence[Point], d: int) -> "VortexConfig":
        if len(points) != 2 * abs(d):
            raise UsageError(f"degree {d} needs {2 * abs(d)} points, got {len(points)}", field="points")
        return cls(points=tuple(points), sign=1 if d >= 0 else -1)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)

    @property
    def q_winding(self) -> int:
        return self.sign * len(self.points)

    def canonical(self) -> "VortexConfig":
        """Same configuration with points in lexicographic order"""
        return VortexConfig(points=tuple(sorted(self.points)), sign=self.sign)

    def clearance(self, domain: Domain) -> float:
        """Half the smallest pairwise distance, capped by the distance to ∂Ω"""
        pts = self.array
        if not len(pts):
            return math.inf
        gaps = [math.dist(p, q) / 2 for k, p in enumerate(pts) for q in pts[k + 1:]]
        return float(min(gaps + [float(boundary_distance(domain, pts).min())]))

    def validate(self, domain: Domain, grid: LatticeGrid = None) -> None:
        if not self.points:
            return
        if not points_inside(domain, self.points):
            raise UsageError("vortex points must lie inside the domain", field="points")
        if grid is not None and self.clearance(domain) <= 2 * grid.h:
            raise UsageError(f"vortex points closer than 4h (h={grid.h:.4g})", field="points")


def singular_phase(points: np.ndarray, sign: int, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """σ Σⱼ arg(z − aⱼ), multivalued up to 2π"""
    theta = np.zeros_like(X, dtype=float)
    for ax, ay in points:
        theta += np.arctan2(Y - ay, X - ax)
    return sign * theta


def singular_gradient(points: np.ndarray, sign: int, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact gradient of the singular phase"""
    gx = np.zeros_like(X, dtype=float)
    gy = np.zeros_like(X, dtype=float)
    for ax, ay in points:
        dx, dy = X - ax, Y - ay
        r2 = dx * dx + dy * dy
        gx -= dy / r2
        gy += dx / r2
    return sign * np.stack([gx, gy], axis=-1)


class HarmonicSolver:
    """Factorized Dirichlet problem for the 5-point Laplacian on a lattice"""

    def __init__(self, grid: LatticeGrid):
        self.grid = grid
        self.fixed = grid.boundary_nodes()
        self.free = grid.mask & ~self.fixed
        index = grid.node_index()
        lap = grid.laplacian()
        free_idx, fixed_idx = index[self.free], index[self.fixed]
        self._solve = factorized(lap[free_idx][:, free_idx].tocsc())
        self._coupling = lap[free_idx][:, fixed_idx]
        logger.debug(f"Harmonic solver factorized for {len(free_idx)} free nodes")

    def solve(self, boundary_values: np.ndarray) -> np.ndarray:
        """Discrete harmonic extension of values given on the boundary nodes"""
        out = np.zeros(self.grid.shape)
        out[self.fixed] = boundary_values[self.fixed]
        out[self.free] = self._solve(-(self._coupling @ out[self.fixed]))
        return out


@dataclass
class CanonicalMap:
    grid: LatticeGrid
    domain: Domain
    config: VortexConfig
    H: np.ndarray

    @property
    def phase(self) -> np.ndarray:
        X, Y = self.grid.coordinates()
        return singular_phase(self.config.array, self.config.sign, X, Y) + self.H

    @property
    def q(self) -> GridField:
        phase = self.phase
        values = np.stack([np.cos(phase), np.sin(phase)], axis=-1)
        values[~self.grid.mask] = 0.0
        return GridField(self.grid, values)

    def harmonic_gradient(self) -> np.ndarray:
        """∇H at every node by central differences, one-sided at the mask edge"""
        grid = self.grid
        H, mask = self.H, grid.mask
        grad = np.zeros(grid.shape + (2,))
        for axis, comp in ((1, 0), (0, 1)):
            fwd = np.zeros(grid.shape)
            bwd = np.zeros(grid.shape)
            has_fwd = np.zeros(grid.shape, dtype=bool)
            has_bwd = np.zeros(grid.shape, dtype=bool)
            diff = np.diff(H, axis=axis) / grid.h
            valid = grid.horizontal_valid if axis == 1 else grid.vertical_valid
            lo = (slice(None), slice(None, -1)) if axis == 1 else (slice(None, -1), slice(None))
            hi = (slice(None), slice(1, None)) if axis == 1 else (slice(1, None), slice(None))
            fwd[lo] = np.where(valid, diff, 0.0)
            has_fwd[lo] = valid
            bwd[hi] = np.where(valid, diff, 0.0)
            has_bwd[hi] = valid
            count = has_fwd.astype(int) + has_bwd.astype(int)
            grad[..., comp] = np.where(count > 0, (fwd + bwd) / np.maximum(count, 1), 0.0)
        grad[~mask] = 0.0

        # cells just outside the mask borrow the gradient of their nearest mask node
        _, (jj, ii) = ndimage.distance_transform_edt(~mask, return_indices=True)
        return grad[jj, ii]

    def divergence_residual(self, exclusion: float = 0.15) -> float:
        """max |div(q₁∇q₂ − q₂∇q₁)| over interior nodes farther than `exclusion` from every vortex"""
        grid = self.grid
        q = self.q.values
        h = grid.h
        jh = (q[:, :-1, 0] * q[:, 1:, 1] - q[:, :-1, 1] * q[:, 1:, 0]) / h
        jv = (q[:-1, :, 0] * q[1:, :, 1] - q[:-1, :, 1] * q[1:, :, 0]) / h
        jh = np.where(grid.horizontal_valid, jh, 0.0)
        jv = np.where(grid.vertical_valid, jv, 0.0)
        div = np.zeros(grid.shape)
        div[:, :-1] += jh
        div[:, 1:] -= jh
        div[:-1, :] += jv
        div[1:, :] -= jv
        div /= h

        interior = grid.mask & ~grid.boundary_nodes()
        X, Y = grid.coordinates()
        for ax, ay in self.config.array:
            interior &= np.hypot(X - ax, Y - ay) > exclusion
        return float(np.abs(div[interior]).max(initial=0.0))


def _boundary_phase(grid: LatticeGrid, datum: BoundaryDatum, config: VortexConfig, fixed: np.ndarray) -> np.ndarray:
    """Single-valued lift of arg(q_bd) − singular phase along the boundary nodes"""
    X, Y = grid.coordinates()
    pts = np.stack([X[fixed], Y[fixed]], axis=1)
    s = nearest_arclength(datum.domain, pts)
    target = 2 * datum.angle(s)
    psi = wrap_angle(target - singular_phase(config.array, config.sign, X[fixed], Y[fixed]))

    order = np.argsort(s, kind="stable")
    steps = wrap_angle(np.diff(psi[order], append=psi[order][:1]))
    total = float(steps.sum())
    if abs(total) > math.pi:
        raise WindingMismatchError(datum.q_winding, config.q_winding)
    lifted = np.empty_like(psi)
    lifted[order] = psi[order][0] + np.concatenate([[0.0], np.cumsum(steps[:-1])])

    values = np.zeros(grid.shape)
    values[fixed] = lifted
    return values


def canonical_harmonic_map(
    domain: Domain,
    grid: LatticeGrid,
    config: VortexConfig,
    datum: BoundaryDatum,
    solver: HarmonicSolver = None,
) -> CanonicalMap:
    """The unit q-field with the given vortices that matches the datum on the lattice boundary"""
    if datum.q_winding != config.q_winding:
        raise WindingMismatchError(datum.q_winding, config.q_winding)
    config.validate(domain, grid)
    solver = solver or HarmonicSolver(grid)
    boundary = _boundary_phase(grid, datum, config, solver.fixed)
    H = solver.solve(boundary)
    logger.debug(f"Canonical map for {len(config.points)} vortices, H in [{H[grid.mask].min():.3g}, {H[grid.mask].max():.3g}]")
    return CanonicalMap(grid=grid, domain=domain, config=config, H=H)

