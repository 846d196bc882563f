"""
Exact minimal connections by dynamic programming over point subsets
"""
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.connection.base import BaseConnectionSolver, Connection, CostTable, build_cost_table
from src.core.config import settings
from src.geom.domain import Domain, Point

logger = logging.getLogger(__name__)

Choice = Tuple[int, Optional[int]]


class SubsetDPSolver(BaseConnectionSolver):
    """Each point is paired with one other point or sent to its boundary foot.

    f[S] is the cheapest way to serve the subset S; the lowest point of S is
    either sent to the boundary or paired with another member of S.
    """

    name = "subset-dp"

    def __init__(self, max_points: int = None):
        super().__init__(max_points or settings.max_dp_points)

    def solve(self, domain: Domain, points: Sequence[Point]) -> Connection:
        pts = self._check_points(domain, points)
        if not pts:
            return Connection.empty()

        costs = build_cost_table(domain, pts)
        choices = self._optimal_choices(costs, len(pts))

        segments = []
        for choice in choices:
            segments.extend(costs.realize(choice))
        connection = Connection.from_segments(pts, segments)
        logger.info(
            f"Minimal connection of {len(pts)} points: length {connection.total_length:.6f}",
            extra={"points": len(pts), "segments": len(connection.segments)},
        )
        return connection

    def _optimal_choices(self, costs: CostTable, p: int) -> List[Choice]:
        size = 1 << p
        best = np.full(size, np.inf)
        best[0] = 0.0
        choice: Dict[int, Choice] = {}

        for subset in range(1, size):
            i = (subset & -subset).bit_length() - 1
            rest = subset & ~(1 << i)

            options = [(costs.boundary[i] + best[rest], (i, None))]
            remaining = rest
            while remaining:
                j = (remaining & -remaining).bit_length() - 1
                remaining &= remaining - 1
                pair = costs.pair[i, j]
                if np.isfinite(pair):
                    options.append((pair + best[rest & ~(1 << j)], (i, j)))

            value, pick = options[0]
            for candidate_value, candidate in options[1:]:
                if candidate_value < value:
                    value, pick = candidate_value, candidate
                elif candidate_value == value:
                    if self._key(costs, choice, subset, candidate) < self._key(costs, choice, subset, pick):
                        pick = candidate
            best[subset] = value
            choice[subset] = pick

        return self._unwind(choice, size - 1)

    @staticmethod
    def _unwind(choice: Dict[int, Choice], subset: int) -> List[Choice]:
        picks = []
        while subset:
            i, j = choice[subset]
            picks.append((i, j))
            subset &= ~(1 << i)
            if j is not None:
                subset &= ~(1 << j)
        return picks

    def _key(self, costs: CostTable, choice: Dict[int, Choice], subset: int, first: Choice) -> Tuple:
        """Sorted segment endpoints of the configuration that starts with `first`"""
        i, j = first
        rest = subset & ~(1 << i)
        if j is not None:
            rest &= ~(1 << j)
        picks = [first] + self._unwind(choice, rest)
        keys = []
        for pick in picks:
            keys.extend(s.segment.key for s in costs.realize(pick))
        return tuple(sorted(keys))


def solve_min_connection(domain: Domain, points: Sequence[Point]) -> Connection:
    return SubsetDPSolver().solve(domain, points)
