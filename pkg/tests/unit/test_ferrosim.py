"""
Coupled Q/M energy, gradient-flow relaxation, decoupling and walls
"""
import math

import numpy as np
import pytest

from src.connection import solve_min_connection
from src.core.exceptions import RegionError, UsageError
from src.ferrosim import (
    Params,
    RelaxSchedule,
    State,
    boundary_datum,
    decoupled_energy,
    detect_wall,
    el_residual,
    fit_kappa_star,
    kappa_eps,
    kappa_star,
    potential_f_eps,
    recovery_competitor,
    relax_continuation,
    relax_minimize,
    relax_with_restarts,
    total_energy,
    wall_transition_cost,
)
from src.ferrosim.decouple import g_eps, h_potential, well_depth
from src.ferrosim.energy import energy_gradient
from src.ferrosim.params import lambda_limit
from src.ferrosim.relax import perturbed
from src.lifting import GridField, LatticeGrid

FAST = dict(sweep_steps=10, restarts=0, n_jobs=1)


@pytest.fixture(scope="module")
def params():
    return Params.from_eps_beta(0.3, 1.0)


@pytest.fixture
def small_grid(unit_disk):
    return LatticeGrid.for_domain(unit_disk, n=20)


def test_kappa_star_fit_matches_closed_form():
    for beta in (0.5, 1.0, 2.0):
        assert fit_kappa_star(beta) == pytest.approx(kappa_star(beta), rel=1e-2)


def test_minimiser_approaches_limit():
    _, (lam, s) = kappa_eps(0.005, 1.0)
    assert lam == pytest.approx(lambda_limit(1.0), abs=0.05)
    assert s == pytest.approx(1.0, abs=0.05)


def test_kappa_eps_rejects_bad_parameters():
    with pytest.raises(UsageError):
        kappa_eps(0.0, 1.0)
    with pytest.raises(UsageError):
        kappa_eps(0.1, -1.0)


def test_shifted_potential_is_nonnegative(params):
    rng = np.random.default_rng(0)
    q = rng.uniform(-2.0, 2.0, size=(20000, 2))
    m = rng.uniform(-2.5, 2.5, size=(20000, 2))
    assert potential_f_eps(q, m, params).min() >= -1e-9

    at_min = potential_f_eps(np.array([params.s, 0.0]), np.array([params.lam, 0.0]), params)
    assert float(at_min) == pytest.approx(0.0, abs=1e-9)


def test_gradient_matches_finite_differences(unit_disk, small_grid, params):
    datum = boundary_datum(unit_disk, 1)
    rng = np.random.default_rng(4)
    state = perturbed(State.from_datum(small_grid, datum, params), 0.2, rng)
    gq, gm = energy_gradient(state, params)

    dq = rng.normal(size=gq.shape) * state.free[..., None]
    dm = rng.normal(size=gm.shape) * small_grid.mask[..., None]
    t = 1e-5
    q, m = state.Q.values, state.M.values
    plus = total_energy(state.with_values(q + t * dq, m + t * dm), params).total
    minus = total_energy(state.with_values(q - t * dq, m - t * dm), params).total
    directional = float((gq * dq).sum() + (gm * dm).sum())
    assert (plus - minus) / (2 * t) == pytest.approx(directional, rel=1e-5)


def test_residual_rows_hold_the_datum_mismatch(unit_disk, small_grid, params):
    state = perturbed(State.from_datum(small_grid, boundary_datum(unit_disk, 1), params), 0.1, np.random.default_rng(3))
    res_q, res_m = el_residual(state, params)
    fixed = state.fixed
    assert np.allclose(res_q.values[fixed], state.Q.values[fixed] - state.q_bd[fixed])
    assert not res_q.values[~small_grid.mask].any()
    assert not res_m.values[~small_grid.mask].any()


def test_relaxation_lowers_energy(unit_disk, small_grid, params):
    state = State.from_datum(small_grid, boundary_datum(unit_disk, 1), params)
    result = relax_minimize(perturbed(state, 0.1, np.random.default_rng(1)), params, RelaxSchedule(max_sweeps=30, **FAST))
    energies = [row.F for row in result.ledger]
    assert all(b <= a + 1e-12 * max(abs(a), 1.0) for a, b in zip(energies, energies[1:]))
    assert result.energy.total < energies[0]
    # the datum stays installed on the lattice boundary
    fixed = result.state.fixed
    assert np.allclose(result.state.Q.values[fixed], result.state.q_bd[fixed])


def test_uniform_datum_relaxes_to_the_well(unit_disk, small_grid, params):
    state = State.from_datum(small_grid, boundary_datum(unit_disk, 0), params)
    result = relax_minimize(state, params, RelaxSchedule(max_sweeps=100, **FAST))
    assert result.residual < 1e-2 * result.ledger[0].residual
    assert result.audit.q_passed
    assert result.audit.m_passed


def test_restarts_keep_the_best_run(unit_disk, small_grid, params):
    state = State.from_datum(small_grid, boundary_datum(unit_disk, 1), params)
    schedule = RelaxSchedule(max_sweeps=3, sweep_steps=10, restarts=2, seed=9, n_jobs=1)
    first = relax_with_restarts(state, params, schedule)
    second = relax_with_restarts(state, params, schedule)
    assert first.energy.total == second.energy.total
    assert first.restart == second.restart

    plain = relax_minimize(state, params, schedule)
    assert first.energy.total <= plain.energy.total


def test_continuation_goes_down_in_eps(unit_disk, small_grid, params):
    state = State.from_datum(small_grid, boundary_datum(unit_disk, 1), params)
    results = relax_continuation(state, [0.2, 0.3], 1.0, RelaxSchedule(max_sweeps=2, **FAST))
    assert [r.params.eps for r in results] == [0.3, 0.2]
    with pytest.raises(UsageError):
        relax_continuation(state, [], 1.0)


def test_wall_cost_closed_form():
    for beta in (0.0, 0.5, 1.0, 3.0):
        closed, numeric = wall_transition_cost(beta)
        assert numeric == pytest.approx(closed, rel=1e-8)


def test_h_potential_wells():
    beta = 1.0
    a = well_depth(beta)
    assert float(h_potential((a, 0.0), beta)) == pytest.approx(0.0, abs=1e-12)
    assert float(h_potential((-a, 0.0), beta)) == pytest.approx(0.0, abs=1e-12)
    rng = np.random.default_rng(2)
    assert h_potential(rng.uniform(-3, 3, size=(5000, 2)), beta).min() >= -1e-12
    assert float(g_eps(1.0, 0.1, kappa_star(beta))) == pytest.approx(kappa_star(beta) ** 2)


def test_straight_wall_is_one_trail(unit_disk):
    grid = LatticeGrid.for_domain(unit_disk, n=64)
    u = GridField.from_function(grid, lambda X, Y: np.stack([X, np.zeros_like(X)], axis=-1))
    report = detect_wall(u, Params.from_eps_beta(0.1, 1.0))
    assert len(report) == 1
    assert not report.closed[0]
    assert report.total_length == pytest.approx(2.0, abs=3 * grid.h)


def test_recovery_competitor(unit_disk, pair_points):
    grid = LatticeGrid.for_domain(unit_disk, n=40)
    params = Params.from_eps_beta(0.1, 1.0)
    datum = boundary_datum(unit_disk, 1)
    competitor = recovery_competitor(unit_disk, grid, pair_points, solve_min_connection(unit_disk, pair_points), params, datum)
    assert math.isfinite(competitor.energy.total)
    assert competitor.energy.total > 0
    assert math.isfinite(competitor.log_excess(params))
    assert competitor.state.M.norm()[grid.mask].max() <= params.lam + 1e-9


def test_decoupling_of_a_uniform_state(unit_disk, small_grid, params):
    state = State.from_datum(small_grid, boundary_datum(unit_disk, 0), params)
    report = decoupled_energy(state, params)
    assert report.profile.region.sum() == small_grid.mask.sum()
    assert report.total == pytest.approx(total_energy(state, params).total, rel=1e-12)
    assert report.profile.frame_cuts.count == 0

    u = report.profile.u.values[report.profile.region]
    assert np.allclose(np.abs(u[:, 0]), params.lam)
    assert np.allclose(u[:, 1], 0.0, atol=1e-12)


def test_decoupling_rejects_weak_regions(unit_disk, small_grid, params):
    state = State.from_datum(small_grid, boundary_datum(unit_disk, 0), params)
    q = state.Q.values.copy()
    q[10, 10] = 0.0
    with pytest.raises(RegionError):
        decoupled_energy(state.with_values(q, state.M.values), params, region=small_grid.mask)
