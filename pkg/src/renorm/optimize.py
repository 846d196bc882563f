"""
Multi-start minimization of W_β over vortex configurations
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from src.core.config import settings
from src.core.exceptions import FeasibilityError, FerroconnectError, UsageError
from src.core.random import module_rng
from src.ferrosim.state import BoundaryDatum
from src.geom.domain import Domain
from src.geom.predicates import points_inside
from src.lifting.grid import LatticeGrid
from src.renorm.energy import WBeta, w_beta
from src.renorm.harmonic import HarmonicSolver, VortexConfig
from src.workers.pool import run_parallel

logger = logging.getLogger(__name__)

PENALTY = 1e6


@dataclass
class WBetaOptimum:
    best: WBeta
    optima: List[WBeta]
    ledger: List[Dict[str, float]] = field(default_factory=list)

    @property
    def config(self) -> VortexConfig:
        return self.best.config

    @property
    def value(self) -> float:
        return self.best.value


class WBetaObjective:
    """W_β as a function of the flattened point coordinates, penalised off the feasible set"""

    def __init__(self, domain: Domain, grid: LatticeGrid, datum: BoundaryDatum, d: int, beta: float,
                 sigma_factors: Sequence[float] = None):
        self.domain = domain
        self.grid = grid
        self.datum = datum
        self.d = d
        self.beta = beta
        self.sigma_factors = tuple(sigma_factors or settings.sigma_factors)
        self.margin = max(1.05 * max(self.sigma_factors), 2.0) * grid.h
        self.solver = HarmonicSolver(grid)

    def config(self, x: np.ndarray) -> VortexConfig:
        return VortexConfig.for_degree([tuple(p) for p in np.asarray(x).reshape(-1, 2)], self.d)

    def feasible(self, x: np.ndarray) -> bool:
        pts = [tuple(p) for p in np.asarray(x).reshape(-1, 2)]
        if len(set(pts)) != len(pts) or not points_inside(self.domain, pts):
            return False
        return self.config(x).clearance(self.domain) > self.margin

    def evaluate(self, x: np.ndarray, ledger: List[Dict[str, float]] = None) -> Optional[WBeta]:
        if not self.feasible(x):
            return None
        result = w_beta(self.domain, self.grid, self.config(x), self.datum, self.beta, self.sigma_factors, self.solver)
        if ledger is not None:
            ledger.append(result.as_row())
        return result

    def value(self, x: np.ndarray, ledger: List[Dict[str, float]] = None) -> float:
        result = self.evaluate(x, ledger)
        if result is None:
            return PENALTY
        return result.value

    def random_start(self, rng: np.random.Generator, tries: int = 2000) -> Optional[np.ndarray]:
        xmin, ymin, xmax, ymax = self.domain.bounding_box
        count = 2 * abs(self.d)
        for _ in range(tries):
            x = np.stack([rng.uniform(xmin, xmax, count), rng.uniform(ymin, ymax, count)], axis=1).ravel()
            if self.feasible(x):
                return x
        return None


def w_beta_descent(
    objective: WBetaObjective, start: np.ndarray, index: int = 0
) -> Tuple[Optional[WBeta], List[Dict[str, float]]]:
    """One Nelder-Mead descent and its own evaluation ledger; None when it never leaves the infeasible set"""
    ledger: List[Dict[str, float]] = []

    def fun(x: np.ndarray) -> float:
        return objective.value(x, ledger)

    step = 0.1 * max(np.ptp(objective.domain.vertices, axis=0))
    simplex = [start] + [start + step * e for e in np.eye(len(start))]
    try:
        result = minimize(
            fun,
            start,
            method="Nelder-Mead",
            options={"initial_simplex": np.array(simplex), "xatol": 1e-4, "fatol": 1e-7, "maxiter": 600},
        )
    except FerroconnectError as exc:
        logger.warning(f"Descent from {start.round(3).tolist()} failed: {exc.message}")
        return None, _tagged(ledger, index)
    return objective.evaluate(result.x, ledger), _tagged(ledger, index)


def _tagged(ledger: List[Dict[str, float]], index: int) -> List[Dict[str, float]]:
    return [{"start": index, **row} for row in ledger]


def minimize_w_beta(
    domain: Domain,
    datum: BoundaryDatum,
    d: int,
    beta: float,
    grid: LatticeGrid = None,
    grid_n: int = 128,
    starts: int = None,
    seed: int = 0,
    sigma_factors: Sequence[float] = None,
    tie_tolerance: float = None,
    n_jobs: int = None,
) -> WBetaOptimum:
    """Best configuration over several descents; near-ties are reported, ties broken lexicographically"""
    if abs(d) < 1:
        raise UsageError("W_beta minimization needs |d| >= 1", field="degree")
    grid = grid or LatticeGrid.for_domain(domain, n=grid_n)
    starts = starts or settings.w_beta_starts
    tie = settings.w_beta_tie_tolerance if tie_tolerance is None else tie_tolerance

    objective = WBetaObjective(domain, grid, datum, d, beta, sigma_factors)
    rng = module_rng(seed, "w-beta-starts")
    initial = [x for x in (objective.random_start(rng) for _ in range(starts)) if x is not None]
    if not initial:
        raise FeasibilityError(f"no feasible start with clearance {objective.margin:.3g} in {domain.name}")

    descents = run_parallel(
        w_beta_descent, [(objective, x, k) for k, x in enumerate(initial)], n_jobs=n_jobs, desc="w-beta starts"
    )
    # start order
    ledger = [row for _, rows in descents for row in rows]
    found = [r for r, _ in descents if r is not None]
    if not found:
        raise FeasibilityError("every descent ended outside the feasible set")

    found = [
        WBeta(config=r.config.canonical(), W=r.W, spread=r.spread, l_omega=r.l_omega, c_beta=r.c_beta)
        for r in found
    ]
    found.sort(key=lambda r: (r.value, r.config.points))
    best = found[0]
    optima = [r for r in found if r.value - best.value <= tie]
    logger.info(
        f"W_beta minimum {best.value:.6g} at {best.config.points} ({len(optima)} optima within {tie})",
        extra={"beta": beta, "degree": d, "starts": len(initial)},
    )
    return WBetaOptimum(best=best, optima=optima, ledger=ledger)
