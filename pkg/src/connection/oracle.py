"""
Exhaustive minimal-connection oracle
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.connection.base import BaseConnectionSolver, Connection, CostTable, build_cost_table
from src.core.config import settings
from src.geom.domain import Domain, Point

logger = logging.getLogger(__name__)


class ExhaustiveOracle(BaseConnectionSolver):
    """Enumerates every set of pairings with up to `max_incidence` segments per point.

    A point whose pairing degree is even receives a boundary segment, so every
    enumerated configuration has odd incidence everywhere. Nothing assumes that
    optimal configurations use one segment per point.
    """

    name = "exhaustive-oracle"

    def __init__(self, max_points: int = None, max_incidence: int = None):
        super().__init__(max_points or settings.max_oracle_points)
        self.max_incidence = max_incidence or settings.max_oracle_incidence

    def solve(self, domain: Domain, points: Sequence[Point]) -> Connection:
        pts = self._check_points(domain, points)
        if not pts:
            return Connection.empty()

        costs = build_cost_table(domain, pts)
        p = len(pts)
        pairs = [(i, j) for i in range(p) for j in range(i + 1, p) if np.isfinite(costs.pair[i, j])]

        state = {"value": np.inf, "best": None, "visited": 0}
        degree = [0] * p
        chosen: List[Tuple[int, int]] = []

        def finish(pair_cost: float) -> None:
            state["visited"] += 1
            boundary = [i for i in range(p) if degree[i] % 2 == 0]
            if any(degree[i] + 1 > self.max_incidence for i in boundary):
                return
            value = pair_cost + sum(costs.boundary[i] for i in boundary)
            if value > state["value"] * (1 + 1e-12):
                return
            candidate = self._assemble(costs, pts, chosen, boundary)
            incumbent: Optional[Connection] = state["best"]
            if incumbent is None or (candidate.total_length, candidate.sort_key) < (
                incumbent.total_length,
                incumbent.sort_key,
            ):
                state["best"] = candidate
                state["value"] = candidate.total_length

        def visit(k: int, pair_cost: float) -> None:
            if pair_cost > state["value"] * (1 + 1e-12):
                return
            if k == len(pairs):
                finish(pair_cost)
                return
            visit(k + 1, pair_cost)
            i, j = pairs[k]
            if degree[i] < self.max_incidence and degree[j] < self.max_incidence:
                degree[i] += 1
                degree[j] += 1
                chosen.append((i, j))
                visit(k + 1, pair_cost + costs.pair[i, j])
                chosen.pop()
                degree[i] -= 1
                degree[j] -= 1

        visit(0, 0.0)
        logger.debug(f"Oracle visited {state['visited']} configurations for {p} points")
        return state["best"]

    @staticmethod
    def _assemble(costs: CostTable, pts, chosen, boundary) -> Connection:
        segments = []
        for i, j in chosen:
            segments.extend(costs.realize((i, j)))
        for i in boundary:
            segments.extend(costs.realize((i, None)))
        return Connection.from_segments(pts, segments)


def oracle_min_connection(domain: Domain, points: Sequence[Point]) -> Connection:
    return ExhaustiveOracle().solve(domain, points)
