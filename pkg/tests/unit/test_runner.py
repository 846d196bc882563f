"""
Pipeline comparison helpers
"""
import math

import pytest

from src.cli.runner import defect_divergence_residual, endpoints_near_defects, matching_distance
from src.core.schemas import SimulationSummary, WallRecord
from src.ferrosim import boundary_datum
from src.lifting import LatticeGrid
from src.renorm import VortexConfig, canonical_harmonic_map


def summary_with(walls):
    return SimulationSummary(eps=0.1, beta=1.0, energy=0.0, residual=0.0, converged=True, sweeps=1, walls=walls)


def test_matching_distance():
    assert matching_distance([(0, 0), (1, 0)], [(1.1, 0), (0, 0.2)]) == pytest.approx(0.2)
    assert matching_distance([(0, 0)], [(0, 0), (1, 1)]) is None
    assert matching_distance([], []) == 0.0


def test_wall_endpoints_near_defects(pair_points):
    open_wall = WallRecord(length=0.6, start=(-0.29, 0.0), end=(0.3, 0.02))
    loop = WallRecord(length=1.0, closed=True)
    summary = summary_with([open_wall, loop])

    assert endpoints_near_defects(summary, pair_points, 0.05) is True
    assert endpoints_near_defects(summary, pair_points, 0.005) is False
    assert endpoints_near_defects(summary, [], 0.05) is None
    assert endpoints_near_defects(summary_with([loop]), pair_points, 0.05) is True


def test_divergence_residual_at_detected_defects(unit_disk, pair_points):
    grid = LatticeGrid.for_domain(unit_disk, n=64)
    datum = boundary_datum(unit_disk, 1)
    residual = defect_divergence_residual(unit_disk, grid, datum, pair_points, 1)
    expected = canonical_harmonic_map(unit_disk, grid, VortexConfig.for_degree(pair_points, 1), datum)
    assert residual == pytest.approx(expected.divergence_residual())
    assert math.isfinite(residual)

    assert defect_divergence_residual(unit_disk, grid, datum, pair_points[:1], 1) is None
    # too close to the boundary for the lattice
    assert defect_divergence_residual(unit_disk, grid, datum, [(-0.3, 0.0), (0.99, 0.0)], 1) is None
