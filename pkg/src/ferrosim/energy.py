"""
Discrete free energy and Euler-Lagrange residuals of the coupled (Q, M) functional.

Gradients are forward differences on in-domain edges; the potential uses the
node-wise midpoint rule. With E the discrete energy, ∂E/∂q = h²·resQ at free
nodes and ∂E/∂M = ε·h²·resM.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.ferrosim.params import SQRT2, Params
from src.ferrosim.state import State
from src.lifting.grid import GridField

logger = logging.getLogger(__name__)


def qm_dot_m(q: np.ndarray, m: np.ndarray) -> np.ndarray:
    """QM·M in q-coordinates"""
    return (q[..., 0] * (m[..., 0] ** 2 - m[..., 1] ** 2) + 2 * q[..., 1] * m[..., 0] * m[..., 1]) / SQRT2


def q_times_m(q: np.ndarray, m: np.ndarray) -> np.ndarray:
    """The vector QM"""
    return np.stack(
        [q[..., 0] * m[..., 0] + q[..., 1] * m[..., 1], q[..., 1] * m[..., 0] - q[..., 0] * m[..., 1]],
        axis=-1,
    ) / SQRT2


def potential_f_eps(q, m, params: Params) -> np.ndarray:
    """f_ε = ¼(1−|Q|²)² + (ε/4)(1−|M|²)² − εβ QM·M + κ_ε"""
    q = np.asarray(q, dtype=float)
    m = np.asarray(m, dtype=float)
    q2 = (q ** 2).sum(axis=-1)
    m2 = (m ** 2).sum(axis=-1)
    eps, beta = params.eps, params.beta
    return 0.25 * (1 - q2) ** 2 + 0.25 * eps * (1 - m2) ** 2 - eps * beta * qm_dot_m(q, m) + params.kappa


@dataclass
class EnergyReport:
    total: float
    elastic_q: float
    elastic_m: float
    potential: float

    def as_row(self) -> dict:
        return {"F": self.total, "elastic_q": self.elastic_q, "elastic_m": self.elastic_m, "potential": self.potential}


def dirichlet_sum(field: np.ndarray, grid, region: np.ndarray = None) -> float:
    """½ Σ over in-domain edges of |Δu|²; edges restricted to `region` when given"""
    hv, vv = grid.horizontal_valid, grid.vertical_valid
    if region is not None:
        hv = hv & region[:, :-1] & region[:, 1:]
        vv = vv & region[:-1, :] & region[1:, :]
    dh = ((field[:, 1:] - field[:, :-1]) ** 2).sum(axis=-1)
    dv = ((field[1:, :] - field[:-1, :]) ** 2).sum(axis=-1)
    return 0.5 * float(dh[hv].sum() + dv[vv].sum())


def total_energy(state: State, params: Params) -> EnergyReport:
    grid = state.grid
    q, m = state.Q.values, state.M.values
    eq = dirichlet_sum(q, grid)
    em = params.eps * dirichlet_sum(m, grid)
    f = potential_f_eps(q, m, params)
    ep = grid.h ** 2 / params.eps ** 2 * float(f[grid.mask].sum())
    return EnergyReport(total=eq + em + ep, elastic_q=eq, elastic_m=em, potential=ep)


def nonlinear_terms(q: np.ndarray, m: np.ndarray, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """Zeroth-order parts of the residuals"""
    eps, beta = params.eps, params.beta
    q2 = (q ** 2).sum(axis=-1)[..., None]
    m2 = (m ** 2).sum(axis=-1)[..., None]
    mm = np.stack([m[..., 0] ** 2 - m[..., 1] ** 2, 2 * m[..., 0] * m[..., 1]], axis=-1)
    nq = (q2 - 1) * q / eps ** 2 - beta / (SQRT2 * eps) * mm
    nm = (m2 - 1) * m / eps ** 2 - 2 * beta / eps ** 2 * q_times_m(q, m)
    return nq, nm


def el_residual(state: State, params: Params) -> Tuple[GridField, GridField]:
    """resQ = −Δq + ε⁻²(|q|²−1)q − (β/√2ε)(M₁²−M₂², 2M₁M₂); resM = −ΔM + ε⁻²(|M|²−1)M − (2β/ε²)QM.

    Dirichlet rows hold the datum mismatch; missing neighbours act as reflected ghosts.
    """
    grid = state.grid
    q, m = state.Q.values, state.M.values
    h2 = grid.h ** 2
    nq, nm = nonlinear_terms(q, m, params)
    res_q = -grid.apply_laplacian(q) / h2 + nq
    res_m = -grid.apply_laplacian(m) / h2 + nm

    res_q[state.fixed] = q[state.fixed] - state.q_bd[state.fixed]
    m_fixed = state.m_fixed
    if np.any(m_fixed):
        res_m[m_fixed] = m[m_fixed] - state.m_bd[m_fixed]
    off = ~grid.mask
    res_q[off] = 0.0
    res_m[off] = 0.0
    return GridField(grid, res_q), GridField(grid, res_m)


def max_residual(state: State, params: Params) -> float:
    res_q, res_m = el_residual(state, params)
    return float(max(res_q.norm().max(), res_m.norm().max()))


def energy_gradient(state: State, params: Params) -> Tuple[np.ndarray, np.ndarray]:
    """Exact gradient of total_energy in the free unknowns (zero at Dirichlet nodes)"""
    res_q, res_m = el_residual(state, params)
    h2 = state.grid.h ** 2
    gq = h2 * res_q.values
    gm = params.eps * h2 * res_m.values
    gq[state.fixed] = 0.0
    gm[state.m_fixed] = 0.0
    return gq, gm


def gradient_norms(state: State) -> Tuple[float, float]:
    """max |∇Q| and max |∇M| from forward differences"""
    grid = state.grid

    def largest(values):
        dh = np.linalg.norm(values[:, 1:] - values[:, :-1], axis=-1)[grid.horizontal_valid]
        dv = np.linalg.norm(values[1:, :] - values[:-1, :], axis=-1)[grid.vertical_valid]
        return float(max(dh.max(initial=0.0), dv.max(initial=0.0)) / grid.h)

    return largest(state.Q.values), largest(state.M.values)
