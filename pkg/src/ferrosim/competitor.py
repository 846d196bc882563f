"""
Recovery competitor: an explicit (Q, M) pair built from the vortex points and a connection
"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.connection.base import Connection
from src.core.schemas.enums import MagnetizationBoundary
from src.ferrosim.energy import EnergyReport, total_energy
from src.ferrosim.params import SQRT2, Params
from src.ferrosim.state import BoundaryDatum, State
from src.geom.domain import Domain, Point
from src.lifting.construct import construct_lifting
from src.lifting.grid import LatticeGrid
from src.renorm.core import RadialProfile, core_energy
from src.renorm.harmonic import VortexConfig, canonical_harmonic_map

logger = logging.getLogger(__name__)


@dataclass
class Competitor:
    state: State
    energy: EnergyReport
    config: VortexConfig
    connection: Connection

    def log_excess(self, params: Params) -> float:
        """F − π·(number of vortices)·|log ε|"""
        return self.energy.total - math.pi * len(self.config.points) * abs(math.log(params.eps))


def distance_to_segments(points: np.ndarray, connection: Connection) -> np.ndarray:
    """Distance of each point to the union of the connection's segments, ∞ when there are none"""
    out = np.full(len(points), np.inf)
    for seg in connection.cut_segments():
        a = np.asarray(seg.p, dtype=float)
        b = np.asarray(seg.q, dtype=float)
        ab = b - a
        t = np.clip(((points - a) @ ab) / max(float(ab @ ab), 1e-300), 0.0, 1.0)
        foot = a + t[:, None] * ab
        out = np.minimum(out, np.hypot(*(points - foot).T))
    return out


def recovery_competitor(
    domain: Domain,
    grid: LatticeGrid,
    points: Sequence[Point],
    connection: Connection,
    params: Params,
    datum: BoundaryDatum,
    boundary: MagnetizationBoundary = MagnetizationBoundary.NEUMANN,
    profile: RadialProfile = None,
) -> Competitor:
    """Q from the canonical harmonic map with radial cores; M a lifted director with a tanh wall on the connection"""
    config = VortexConfig.for_degree(points, datum.degree)
    cmap = canonical_harmonic_map(domain, grid, config, datum)
    q_star = cmap.q

    X, Y = grid.coordinates()
    modulus = np.ones(grid.shape)
    if config.points:
        profile = profile or core_energy(params.eps)
        for ax, ay in config.points:
            modulus *= profile(np.hypot(X - ax, Y - ay))
    q = params.s * modulus[..., None] * q_star.values

    lifting = construct_lifting(q_star, connection)
    pts = np.stack([X.ravel(), Y.ravel()], axis=1)
    dist = distance_to_segments(pts, connection).reshape(grid.shape)
    wall = np.tanh(params.lam * dist / (SQRT2 * params.eps))
    m = params.lam * wall[..., None] * lifting.lifting.values

    state = State.from_fields(grid, datum, params, q, m, boundary)
    energy = total_energy(state, params)
    logger.info(
        f"Recovery competitor: F={energy.total:.6g} for {len(config.points)} vortices, "
        f"connection length {connection.total_length:.4g}",
        extra={"eps": params.eps, "beta": params.beta},
    )
    return Competitor(state=state, energy=energy, config=config, connection=connection)
