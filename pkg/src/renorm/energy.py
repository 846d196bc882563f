"""
Renormalized energy of a canonical harmonic map and its wall-weighted variant
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy import ndimage

from src.connection.solver import solve_min_connection
from src.core.config import settings
from src.core.exceptions import WindowError
from src.ferrosim.decouple import wall_transition_cost
from src.ferrosim.state import BoundaryDatum
from src.geom.constants import INSIDE_CODE
from src.geom.domain import Domain
from src.geom.predicates import classify
from src.lifting.grid import LatticeGrid
from src.renorm.harmonic import CanonicalMap, HarmonicSolver, VortexConfig, canonical_harmonic_map, singular_gradient

logger = logging.getLogger(__name__)

SUBSAMPLES = 8


@dataclass
class RenormalizedEnergy:
    value: float
    spread: float
    sigmas: Tuple[float, ...]
    window_values: Tuple[float, ...]

    def table(self) -> Sequence[Dict[str, float]]:
        return [{"sigma": s, "W_sigma": w} for s, w in zip(self.sigmas, self.window_values)]


@dataclass
class WBeta:
    config: VortexConfig
    W: float
    spread: float
    l_omega: float
    c_beta: float
    extra: Dict[str, float] = field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.W + self.c_beta * self.l_omega

    def as_row(self) -> Dict[str, float]:
        row = {"W": self.W, "spread": self.spread, "L_omega": self.l_omega, "W_beta": self.value}
        for k, (x, y) in enumerate(self.config.points):
            row[f"x{k}"], row[f"y{k}"] = x, y
        return row


class CellQuadrature:
    """Midpoint rule on lattice cells; cells cut by ∂Ω or by a core disc are subsampled"""

    def __init__(self, cmap: CanonicalMap):
        grid = cmap.grid
        self.grid = grid
        self.points = cmap.config.array
        self.sign = cmap.config.sign
        self.grad_h = cmap.harmonic_gradient()

        cover = ndimage.binary_dilation(grid.mask)
        self.plain = grid.mask & ~grid.boundary_nodes()
        band = cover & ~self.plain
        self.band_nodes = np.argwhere(band)
        sx, sy = self._subsamples(self.band_nodes)
        codes = classify(cmap.domain, np.stack([sx.ravel(), sy.ravel()], axis=1)).reshape(sx.shape)
        self.band_inside = codes == INSIDE_CODE

    def _subsamples(self, nodes: np.ndarray):
        offsets = ((np.arange(SUBSAMPLES) + 0.5) / SUBSAMPLES - 0.5) * self.grid.h
        ox, oy = np.meshgrid(offsets, offsets)
        x0 = self.grid.origin[0] + nodes[:, 1] * self.grid.h
        y0 = self.grid.origin[1] + nodes[:, 0] * self.grid.h
        return x0[:, None] + ox.ravel()[None, :], y0[:, None] + oy.ravel()[None, :]

    def _outside_cores(self, x, y, sigma: float) -> np.ndarray:
        keep = np.ones(x.shape, dtype=bool)
        for ax, ay in self.points:
            keep &= np.hypot(x - ax, y - ay) >= sigma
        return keep

    def _subsampled(self, nodes: np.ndarray, inside: np.ndarray, sigma: float) -> float:
        if not len(nodes):
            return 0.0
        x, y = self._subsamples(nodes)
        keep = inside & self._outside_cores(x, y, sigma)
        g = self.grad_h[nodes[:, 0], nodes[:, 1]][:, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            s = singular_gradient(self.points, self.sign, x, y)
        density = ((s + g) ** 2).sum(axis=-1)
        return float(np.where(keep, density, 0.0).sum()) * self.grid.h ** 2 / SUBSAMPLES ** 2

    def dirichlet(self, sigma: float) -> float:
        """∫ |∇q*|² over Ω minus the σ-discs"""
        grid = self.grid
        X, Y = grid.coordinates()
        near = np.zeros(grid.shape, dtype=bool)
        reach = sigma + grid.h
        for ax, ay in self.points:
            near |= np.hypot(X - ax, Y - ay) < reach
        plain = self.plain & ~near

        s = singular_gradient(self.points, self.sign, X[plain], Y[plain])
        total = float(((s + self.grad_h[plain]) ** 2).sum()) * grid.h ** 2

        cut = np.argwhere(self.plain & near)
        total += self._subsampled(cut, np.ones((len(cut), SUBSAMPLES ** 2), dtype=bool), sigma)
        total += self._subsampled(self.band_nodes, self.band_inside, sigma)
        return total


def extrapolate_sigma(sigmas: Sequence[float], values: Sequence[float]) -> Tuple[float, float]:
    """Intercept of the least-squares line in σ² and the range of the pairwise intercepts"""
    s2 = np.asarray(sigmas, dtype=float) ** 2
    w = np.asarray(values, dtype=float)
    _, intercept = np.polyfit(s2, w, 1)
    pairwise = [
        (s2[b] * w[a] - s2[a] * w[b]) / (s2[b] - s2[a])
        for a, b in itertools.combinations(range(len(s2)), 2)
    ]
    return float(intercept), float(max(pairwise) - min(pairwise))


def renormalized_energy(
    domain: Domain,
    grid: LatticeGrid,
    config: VortexConfig,
    datum: BoundaryDatum,
    sigma_factors: Sequence[float] = None,
    solver: HarmonicSolver = None,
    cmap: CanonicalMap = None,
) -> RenormalizedEnergy:
    """lim σ→0 of ½∫_{Ω∖∪B_σ}|∇q*|² − π·(number of vortices)·|log σ|"""
    factors = tuple(sigma_factors or settings.sigma_factors)
    sigmas = tuple(f * grid.h for f in factors)
    clearance = config.clearance(domain)
    if max(sigmas) >= clearance:
        raise WindowError(max(sigmas), clearance)

    cmap = cmap or canonical_harmonic_map(domain, grid, config, datum, solver)
    quad = CellQuadrature(cmap)
    n = len(config.points)
    values = tuple(0.5 * quad.dirichlet(s) - math.pi * n * abs(math.log(s)) for s in sigmas)
    value, spread = extrapolate_sigma(sigmas, values)
    logger.debug(f"W over sigma window {sigmas}: {values} -> {value:.6g} (spread {spread:.2e})")
    return RenormalizedEnergy(value=value, spread=spread, sigmas=sigmas, window_values=values)


def w_beta(
    domain: Domain,
    grid: LatticeGrid,
    config: VortexConfig,
    datum: BoundaryDatum,
    beta: float,
    sigma_factors: Sequence[float] = None,
    solver: HarmonicSolver = None,
) -> WBeta:
    """W plus c_β times the minimal connection length of the vortex points"""
    renorm = renormalized_energy(domain, grid, config, datum, sigma_factors, solver)
    c_beta, _ = wall_transition_cost(beta)
    l_omega = solve_min_connection(domain, list(config.points)).total_length if config.points else 0.0
    return WBeta(config=config, W=renorm.value, spread=renorm.spread, l_omega=l_omega, c_beta=c_beta)
