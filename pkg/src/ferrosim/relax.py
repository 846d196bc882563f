"""
Semi-implicit gradient flow for the coupled (Q, M) energy
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import factorized

from src.core.config import settings
from src.core.exceptions import StepSizeError, UsageError
from src.core.random import module_rng
from src.ferrosim.energy import EnergyReport, gradient_norms, max_residual, nonlinear_terms, total_energy
from src.ferrosim.params import SQRT2, Params
from src.ferrosim.state import State
from src.workers.pool import run_parallel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RelaxSchedule:
    """Knobs of one relaxation run; unset values come from settings"""
    dt_factor: float = None
    sweep_steps: int = None
    max_sweeps: int = None
    tol_flow_factor: float = None
    tol_stationary_factor: float = None
    restarts: int = None
    restart_noise: float = None
    seed: int = 0
    n_jobs: Optional[int] = None

    def resolved(self) -> "RelaxSchedule":
        return replace(
            self,
            dt_factor=self.dt_factor if self.dt_factor is not None else settings.dt_factor,
            sweep_steps=self.sweep_steps or settings.sweep_steps,
            max_sweeps=self.max_sweeps or settings.max_sweeps,
            tol_flow_factor=self.tol_flow_factor or settings.tol_flow_factor,
            tol_stationary_factor=self.tol_stationary_factor or settings.tol_stationary_factor,
            restarts=self.restarts if self.restarts is not None else settings.restarts,
            restart_noise=self.restart_noise if self.restart_noise is not None else settings.restart_noise,
        )

    def time_step(self, eps: float, h: float) -> float:
        factor = self.dt_factor if self.dt_factor is not None else settings.dt_factor
        return factor * eps * eps * h * h / (h * h + 4 * eps * eps)

    def tol_stationary(self, eps: float) -> float:
        return (self.tol_stationary_factor or settings.tol_stationary_factor) / eps


@dataclass
class LedgerRow:
    sweep: int
    eps: float
    F: float
    elastic_q: float
    elastic_m: float
    potential: float
    residual: float

    @classmethod
    def of(cls, sweep: int, eps: float, energy: EnergyReport, residual: float) -> "LedgerRow":
        return cls(sweep, eps, energy.total, energy.elastic_q, energy.elastic_m, energy.potential, residual)

    def as_dict(self) -> Dict[str, float]:
        return dict(self.__dict__)


@dataclass
class MaxPrincipleAudit:
    """Post-run bounds on |Q| and |M|"""
    max_q: float
    max_m_sq: float
    m_bound: float
    q_bound: float
    cubic_lhs: float
    cubic_rhs: float
    grad_q_eps: float
    grad_m_eps: float

    @property
    def m_passed(self) -> bool:
        return self.max_m_sq <= self.m_bound

    @property
    def q_passed(self) -> bool:
        return self.max_q <= self.q_bound

    @property
    def cubic_passed(self) -> bool:
        return self.cubic_lhs <= self.cubic_rhs

    @property
    def passed(self) -> bool:
        return self.m_passed and self.q_passed

    def as_dict(self) -> Dict[str, float]:
        out = dict(self.__dict__)
        out.update(m_passed=self.m_passed, q_passed=self.q_passed, cubic_passed=self.cubic_passed)
        return out


@dataclass
class RelaxResult:
    state: State
    params: Params
    energy: EnergyReport
    residual: float
    converged: bool
    sweeps: int
    ledger: List[LedgerRow] = field(default_factory=list)
    audit: Optional[MaxPrincipleAudit] = None
    restart: int = 0


def max_principle_audit(state: State, params: Params, slack: float = None) -> MaxPrincipleAudit:
    slack = settings.max_principle_slack if slack is None else slack
    grid = state.grid
    q_norm = state.Q.norm()
    m_norm = state.M.norm()
    max_q = float(q_norm[grid.mask].max())
    max_m_sq = float((m_norm[grid.mask] ** 2).max())
    eps, beta = params.eps, params.beta

    # cubic bound at the interior maximum of |Q|
    interior = state.free
    if np.any(interior):
        at = float(q_norm[interior].max())
    else:
        at = max_q
    cubic_lhs = at ** 3
    cubic_rhs = (1 + beta * beta * eps) * at + beta * eps / SQRT2 + slack

    grad_q, grad_m = gradient_norms(state)
    return MaxPrincipleAudit(
        max_q=max_q,
        max_m_sq=max_m_sq,
        m_bound=1 + SQRT2 * beta * max_q + slack,
        q_bound=1 + 5 * beta * eps,
        cubic_lhs=cubic_lhs,
        cubic_rhs=cubic_rhs,
        grad_q_eps=grad_q * eps,
        grad_m_eps=grad_m * eps,
    )


class SemiImplicitStepper:
    """(I − Δt L/h²) u⁺ = u − Δt N(u) on the free nodes, Dirichlet values on the right-hand side"""

    def __init__(self, state: State, params: Params, dt: float):
        self.grid = state.grid
        self.params = params
        self.dt = dt
        index = self.grid.node_index()
        lap = self.grid.laplacian()
        self.q_blocks = self._blocks(lap, index, state.free, state.fixed & self.grid.mask)
        m_free = self.grid.mask & ~state.m_fixed
        self.m_blocks = self._blocks(lap, index, m_free, state.m_fixed & self.grid.mask)
        self.q_free = state.free
        self.m_free = m_free

    def _blocks(self, lap, index, free, fixed):
        free_idx = index[free]
        fixed_idx = index[fixed]
        scale = self.dt / self.grid.h ** 2
        block = lap[free_idx][:, free_idx]
        system = (sparse.identity(len(free_idx), format="csc") - scale * block).tocsc()
        coupling = scale * lap[free_idx][:, fixed_idx] if len(fixed_idx) else None
        return factorized(system), coupling, fixed

    @staticmethod
    def _solve(blocks, values, forcing, free, dt):
        solve, coupling, fixed = blocks
        rhs = values[free] - dt * forcing[free]
        if coupling is not None:
            rhs = rhs + coupling @ values[fixed]
        out = values.copy()
        out[free] = np.stack([solve(np.ascontiguousarray(rhs[:, k])) for k in range(rhs.shape[1])], axis=1)
        return out

    def step(self, q: np.ndarray, m: np.ndarray):
        nq, nm = nonlinear_terms(q, m, self.params)
        q_next = self._solve(self.q_blocks, q, nq, self.q_free, self.dt)
        m_next = self._solve(self.m_blocks, m, nm, self.m_free, self.dt)
        return q_next, m_next


def relax_minimize(state: State, params: Params, schedule: RelaxSchedule = None) -> RelaxResult:
    """Run sweeps of the semi-implicit flow until both the energy decrease and the residual are small"""
    schedule = (schedule or RelaxSchedule()).resolved()
    state = state.enforce()
    grid = state.grid
    dt = schedule.time_step(params.eps, grid.h)
    stepper = SemiImplicitStepper(state, params, dt)
    tol_stationary = schedule.tol_stationary(params.eps)

    energy = total_energy(state, params)
    residual = max_residual(state, params)
    ledger = [LedgerRow.of(0, params.eps, energy, residual)]
    logger.info(
        f"Relaxing eps={params.eps}, beta={params.beta}, dt={dt:.3e}, F0={energy.total:.6g}",
        extra={"eps": params.eps, "beta": params.beta, "nodes": int(grid.mask.sum())},
    )

    q, m = state.Q.values.copy(), state.M.values.copy()
    converged = False
    sweep = 0
    for sweep in range(1, schedule.max_sweeps + 1):
        for _ in range(schedule.sweep_steps):
            q, m = stepper.step(q, m)
        state = state.with_values(q, m)
        new_energy = total_energy(state, params)
        residual = max_residual(state, params)
        decrease = energy.total - new_energy.total
        ledger.append(LedgerRow.of(sweep, params.eps, new_energy, residual))

        if decrease < -1e-12 * max(abs(energy.total), 1.0):
            raise StepSizeError(sweep, energy.total, new_energy.total)
        energy = new_energy

        if decrease <= schedule.tol_flow_factor * max(energy.total, 1.0) and residual < tol_stationary:
            converged = True
            break
        if sweep % 20 == 0:
            logger.debug(f"sweep {sweep}: F={energy.total:.10g}, residual={residual:.3e}")

    if not converged:
        logger.warning(
            f"Relaxation stopped after {sweep} sweeps without meeting tolerances "
            f"(residual {residual:.3e}, target {tol_stationary:.3e})"
        )
    audit = max_principle_audit(state, params)
    logger.info(
        f"Relaxation finished: F={energy.total:.8g}, sweeps={sweep}, converged={converged}",
        extra={"energy": energy.total, "sweeps": sweep, "converged": converged},
    )
    return RelaxResult(
        state=state,
        params=params,
        energy=energy,
        residual=residual,
        converged=converged,
        sweeps=sweep,
        ledger=ledger,
        audit=audit,
    )


def perturbed(state: State, amplitude: float, rng: np.random.Generator) -> State:
    """Add uniform noise of the given amplitude on non-Dirichlet nodes"""
    q = state.Q.values.copy()
    m = state.M.values.copy()
    q[state.free] += amplitude * rng.uniform(-1.0, 1.0, size=q[state.free].shape)
    m_free = state.grid.mask & ~state.m_fixed
    m[m_free] += amplitude * rng.uniform(-1.0, 1.0, size=m[m_free].shape)
    return state.with_values(q, m)


def relax_restart(state: State, params: Params, schedule: RelaxSchedule, restart: int) -> RelaxResult:
    """One restart: restart 0 is the unperturbed start"""
    start = state
    if restart > 0:
        rng = module_rng(schedule.seed, f"restart-{restart}")
        start = perturbed(state, schedule.restart_noise, rng)
    result = relax_minimize(start, params, schedule)
    result.restart = restart
    return result


def relax_with_restarts(state: State, params: Params, schedule: RelaxSchedule = None) -> RelaxResult:
    """Best of the unperturbed run and `restarts` noisy restarts; ties go to the lowest restart index"""
    schedule = (schedule or RelaxSchedule()).resolved()
    arguments = [(state, params, schedule, k) for k in range(schedule.restarts + 1)]
    results = run_parallel(relax_restart, arguments, n_jobs=schedule.n_jobs, desc="restarts")
    for r in results:
        logger.info(f"restart {r.restart}: F={r.energy.total:.8g}, converged={r.converged}")
    return min(results, key=lambda r: (r.energy.total, r.restart))


def rescaled(state: State, old: Params, new: Params) -> State:
    """Carry a state to new parameters; Dirichlet M data follow λ"""
    if state.m_bd is None or old.lam == new.lam:
        return state
    return replace(state, m_bd=state.m_bd * (new.lam / old.lam)).enforce()


def relax_continuation(
    state: State,
    eps_levels: Sequence[float],
    beta: float,
    schedule: RelaxSchedule = None,
) -> List[RelaxResult]:
    """Warm-started relaxations over decreasing ε"""
    if not eps_levels:
        raise UsageError("empty continuation schedule", field="continuation")
    levels = sorted(eps_levels, reverse=True)
    results: List[RelaxResult] = []
    previous: Optional[Params] = None
    for eps in levels:
        params = Params.from_eps_beta(eps, beta)
        if previous is not None:
            state = rescaled(results[-1].state, previous, params)
        result = relax_with_restarts(state, params, schedule)
        results.append(result)
        previous = params
    return results
