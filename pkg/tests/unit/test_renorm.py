"""
Canonical harmonic maps, renormalized energy, core energy and W_β minimization
"""
import math

import numpy as np
import pytest

from src.core.exceptions import FeasibilityError, UsageError, WindingMismatchError, WindowError
from src.ferrosim import boundary_datum, wall_transition_cost
from src.geom import disk
from src.lifting import LatticeGrid
from src.renorm import (
    VortexConfig,
    canonical_harmonic_map,
    core_energy,
    core_energy_limit,
    minimize_w_beta,
    renormalized_energy,
    w_beta,
)


@pytest.fixture(scope="module")
def disk128():
    domain = disk()
    return domain, LatticeGrid.for_domain(domain, n=128), boundary_datum(domain, 1)


def pair(r, vertical=False):
    points = [(0.0, -r), (0.0, r)] if vertical else [(-r, 0.0), (r, 0.0)]
    return VortexConfig.for_degree(points, 1)


def test_boundary_trace_is_the_datum(disk128):
    domain, grid, datum = disk128
    cmap = canonical_harmonic_map(domain, grid, pair(0.3), datum)
    fixed = grid.boundary_nodes()
    X, Y = grid.coordinates()
    expected = datum.at_points(np.stack([X[fixed], Y[fixed]], axis=1))
    assert np.allclose(cmap.q.values[fixed], expected, atol=1e-9)
    assert np.allclose(cmap.q.norm()[grid.mask], 1.0)


def test_winding_mismatch(disk128):
    domain, grid, _ = disk128
    with pytest.raises(WindingMismatchError):
        canonical_harmonic_map(domain, grid, pair(0.3), boundary_datum(domain, 2))


def test_divergence_residual_shrinks_under_refinement(unit_disk):
    datum = boundary_datum(unit_disk, 1)
    residuals = [
        canonical_harmonic_map(unit_disk, LatticeGrid.for_domain(unit_disk, n=n), pair(0.3), datum).divergence_residual()
        for n in (64, 128)
    ]
    assert residuals[1] <= 0.5 * residuals[0]


def test_quarter_turn_leaves_w_unchanged(disk128):
    domain, grid, datum = disk128
    flat = renormalized_energy(domain, grid, pair(0.35), datum)
    turned = renormalized_energy(domain, grid, pair(0.35, vertical=True), datum)
    assert turned.value == pytest.approx(flat.value, abs=1e-5)


def test_same_sign_pair_repels(disk128):
    domain, grid, datum = disk128
    radii = [0.15, 0.2, 0.3, 0.4]
    values = [renormalized_energy(domain, grid, pair(r), datum).value for r in radii]
    assert all(a > b for a, b in zip(values, values[1:]))

    slope, _ = np.polyfit(np.log(2 * np.asarray(radii)), values, 1)
    assert slope == pytest.approx(-2 * math.pi, rel=0.1)


def test_window_must_fit(disk128):
    domain, grid, datum = disk128
    with pytest.raises(WindowError):
        renormalized_energy(domain, grid, pair(0.02), datum)


def test_w_beta_adds_the_wall_cost(disk128):
    domain, grid, datum = disk128
    config = pair(0.3)
    plain = renormalized_energy(domain, grid, config, datum)
    at_zero = w_beta(domain, grid, config, datum, 0.0)
    assert at_zero.l_omega == pytest.approx(0.6, abs=1e-9)
    assert at_zero.c_beta == pytest.approx(2 * math.sqrt(2) / 3)
    assert at_zero.value == pytest.approx(plain.value + 2 * math.sqrt(2) / 3 * 0.6)
    assert w_beta(domain, grid, config, datum, 1.0).value > at_zero.value


def test_wall_cost_increases_with_beta():
    costs = [wall_transition_cost(b)[0] for b in (0.0, 0.5, 1.0, 2.0)]
    assert costs == sorted(costs)
    assert len(set(costs)) == len(costs)


def test_radial_profile():
    profile = core_energy(0.1)
    assert profile.monotone
    assert profile.f.min() >= 0.0 and profile.f.max() <= 1.0
    assert profile(2.0) == 1.0
    with pytest.raises(UsageError):
        core_energy(0.6)


def test_core_energy_limit_is_cauchy_and_positive():
    limit = core_energy_limit()
    assert limit.eps_levels == [0.1, 0.05, 0.025]
    assert all(r >= 2 for r in limit.cauchy_ratios)
    assert limit.gamma_star > 0


def test_minimization_needs_a_feasible_start(unit_disk):
    datum = boundary_datum(unit_disk, 1)
    with pytest.raises(FeasibilityError):
        minimize_w_beta(unit_disk, datum, 1, 1.0, grid_n=8, starts=2)
    with pytest.raises(UsageError):
        minimize_w_beta(unit_disk, boundary_datum(unit_disk, 0), 0, 1.0)


def test_w_beta_ledger_is_in_start_order(unit_disk):
    datum = boundary_datum(unit_disk, 1)
    runs = [
        minimize_w_beta(unit_disk, datum, 1, 1.0, grid_n=40, starts=2, seed=3, sigma_factors=(1.0, 1.5, 2.0), n_jobs=4)
        for _ in range(2)
    ]
    assert runs[0].ledger == runs[1].ledger
    starts = [row["start"] for row in runs[0].ledger]
    assert starts == sorted(starts)
    assert runs[0].value == runs[1].value


@pytest.mark.slow
def test_disk_pair_has_interior_optimum(unit_disk):
    optimum = minimize_w_beta(unit_disk, boundary_datum(unit_disk, 1), 1, 1.0, grid_n=96, starts=3, seed=1)
    a, b = np.asarray(optimum.config.points)
    assert 0.0 < np.hypot(*a) < 1.0 and 0.0 < np.hypot(*b) < 1.0
    # the pair sits symmetrically about the centre
    assert np.hypot(*(a + b)) < 0.1
