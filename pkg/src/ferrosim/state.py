"""
Boundary data and (Q, M) lattice states
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from src.core.schemas.enums import MagnetizationBoundary
from src.cover.double_cover import director_from_angle, q_from_angle
from src.ferrosim.params import Params
from src.geom.domain import Domain
from src.geom.predicates import nearest_arclength
from src.lifting.grid import GridField, LatticeGrid

logger = logging.getLogger(__name__)

PhaseFunction = Callable[[np.ndarray], np.ndarray]


@dataclass
class BoundaryDatum:
    """Director n_bd(s) of angle d·2πs/P + phase(s) along the boundary arc length s"""
    domain: Domain
    degree: int
    phase: Optional[PhaseFunction] = None

    def angle(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        theta = self.degree * 2 * math.pi * s / self.domain.perimeter
        if self.phase is not None:
            theta = theta + np.asarray(self.phase(s), dtype=float)
        return theta

    def director(self, s) -> np.ndarray:
        return director_from_angle(self.angle(s))

    def q(self, s) -> np.ndarray:
        return q_from_angle(self.angle(s))

    def samples(self, count: int) -> np.ndarray:
        """q_bd at `count` equally spaced arc-length positions"""
        s = np.linspace(0.0, self.domain.perimeter, count, endpoint=False)
        return self.q(s)

    def at_points(self, points) -> np.ndarray:
        """q_bd at the nearest boundary point of each point"""
        return self.q(nearest_arclength(self.domain, points))

    def director_at_points(self, points) -> np.ndarray:
        return self.director(nearest_arclength(self.domain, points))

    @property
    def q_winding(self) -> int:
        return 2 * self.degree


def boundary_datum(domain: Domain, d: int, phase: Optional[PhaseFunction] = None) -> BoundaryDatum:
    return BoundaryDatum(domain=domain, degree=int(d), phase=phase)


@dataclass
class State:
    """Q (as q-vector) and M on a masked lattice, with the Dirichlet data they carry"""
    Q: GridField
    M: GridField
    fixed: np.ndarray
    q_bd: np.ndarray
    boundary: MagnetizationBoundary = MagnetizationBoundary.NEUMANN
    m_bd: Optional[np.ndarray] = None

    @property
    def grid(self) -> LatticeGrid:
        return self.Q.grid

    @property
    def free(self) -> np.ndarray:
        return self.grid.mask & ~self.fixed

    @property
    def m_fixed(self) -> np.ndarray:
        if self.boundary == MagnetizationBoundary.DIRICHLET:
            return self.fixed
        return np.zeros(self.grid.shape, dtype=bool)

    def enforce(self) -> "State":
        """Reset Dirichlet nodes to their data"""
        q = self.Q.values.copy()
        q[self.fixed] = self.q_bd[self.fixed]
        m = self.M.values.copy()
        if self.boundary == MagnetizationBoundary.DIRICHLET:
            m[self.fixed] = self.m_bd[self.fixed]
        return replace(self, Q=GridField(self.grid, q), M=GridField(self.grid, m))

    def with_values(self, q: np.ndarray, m: np.ndarray) -> "State":
        return replace(self, Q=GridField(self.grid, q), M=GridField(self.grid, m))

    def copy(self) -> "State":
        return replace(self, Q=self.Q.copy(), M=self.M.copy())

    @classmethod
    def from_fields(
        cls,
        grid: LatticeGrid,
        datum: BoundaryDatum,
        params: Params,
        q: np.ndarray,
        m: np.ndarray,
        boundary: MagnetizationBoundary = MagnetizationBoundary.NEUMANN,
    ) -> "State":
        """State with the datum installed on the lattice boundary nodes"""
        fixed = grid.boundary_nodes()
        X, Y = grid.coordinates()
        pts = np.stack([X[fixed], Y[fixed]], axis=1)
        q_bd = np.zeros(grid.shape + (2,))
        q_bd[fixed] = datum.at_points(pts)
        m_bd = None
        if MagnetizationBoundary(boundary) == MagnetizationBoundary.DIRICHLET:
            m_bd = np.zeros(grid.shape + (2,))
            m_bd[fixed] = params.lam * datum.director_at_points(pts)

        mask = grid.mask[..., None]
        state = cls(
            Q=GridField(grid, np.where(mask, q, 0.0)),
            M=GridField(grid, np.where(mask, m, 0.0)),
            fixed=fixed,
            q_bd=q_bd,
            boundary=MagnetizationBoundary(boundary),
            m_bd=m_bd,
        )
        return state.enforce()

    @classmethod
    def from_datum(
        cls,
        grid: LatticeGrid,
        datum: BoundaryDatum,
        params: Params,
        boundary: MagnetizationBoundary = MagnetizationBoundary.NEUMANN,
    ) -> "State":
        """Nearest-boundary extension of the datum, scaled to the potential minimum"""
        X, Y = grid.coordinates()
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)
        s = nearest_arclength(datum.domain, pts)
        q = params.s * datum.q(s).reshape(grid.shape + (2,))
        m = params.lam * datum.director(s).reshape(grid.shape + (2,))
        return cls.from_fields(grid, datum, params, q, m, boundary)
