"""
Eigenframe decoupling of the magnetization and the one-dimensional wall cost.

Where |Q| ≥ ½ the q-field has a director frame (n, m), m = n rotated by 90°;
u = (M·n, M·m) turns the magnetization part of the energy into an Allen-Cahn
functional with the double well h(u), whose wells are u± = (±a, 0),
a² = 1 + √2β.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad

from src.core.exceptions import RegionError
from src.ferrosim.energy import dirichlet_sum, potential_f_eps
from src.ferrosim.params import SQRT2, Params, kappa_star
from src.ferrosim.state import State
from src.lifting.construct import continue_directors, edge_signs, unit_q
from src.lifting.grid import EdgeSet, GridField, LatticeGrid

logger = logging.getLogger(__name__)

WEAK_Q = 0.5


def well_depth(beta: float) -> float:
    """a = (√2β + 1)^{1/2}, the |u| of both wells"""
    return math.sqrt(SQRT2 * beta + 1.0)


def h_potential(u, beta: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    u2 = (u ** 2).sum(axis=-1)
    return 0.25 * (u2 - 1) ** 2 - beta / SQRT2 * (u[..., 0] ** 2 - u[..., 1] ** 2) + kappa_star(beta)


def g_eps(q_norm, eps: float, k_star: float) -> np.ndarray:
    """(1/4ε²)(|Q|²−1)² − (2κ*/ε)(|Q|−1) + κ*²"""
    r = np.asarray(q_norm, dtype=float)
    return (r * r - 1) ** 2 / (4 * eps * eps) - 2 * k_star / eps * (r - 1) + k_star * k_star


def wall_transition_cost(beta: float) -> Tuple[float, float]:
    """Closed form (2√2/3)a³ and the quadrature of ∫√(2h(t,0)) dt over [−a, a]"""
    a = well_depth(beta)
    closed = 2 * SQRT2 / 3 * a ** 3

    def integrand(t):
        return math.sqrt(max(2.0 * float(h_potential((t, 0.0), beta)), 0.0))

    value, error = quad(integrand, -a, a, epsabs=1e-13, epsrel=1e-13, limit=200)
    logger.debug(f"wall cost beta={beta}: closed={closed:.12g}, quad={value:.12g} (±{error:.1e})")
    return closed, float(value)


@dataclass
class WallProfileVar:
    """u on the frame region, with the edges across which the frame flips"""
    u: GridField
    frame: np.ndarray
    region: np.ndarray
    frame_cuts: EdgeSet

    def corrected_differences(self) -> Tuple[np.ndarray, np.ndarray]:
        """Horizontal and vertical u differences with the far end carried into the near end's frame"""
        values = self.u.values
        sh = np.where(self.frame_cuts.horizontal, -1.0, 1.0)[..., None]
        sv = np.where(self.frame_cuts.vertical, -1.0, 1.0)[..., None]
        dh = sh * values[:, 1:] - values[:, :-1]
        dv = sv * values[1:, :] - values[:-1, :]
        return dh, dv


@dataclass
class DecoupledReport:
    profile: WallProfileVar
    q_term: float
    u_term: float
    total: float

    @property
    def remainder(self) -> float:
        return self.total - self.q_term - self.u_term

    def as_dict(self) -> dict:
        return {"q_term": self.q_term, "u_term": self.u_term, "F_region": self.total, "remainder": self.remainder}


def frame_region(state: State, region: Optional[np.ndarray] = None, frame_source: GridField = None) -> np.ndarray:
    source = state.Q if frame_source is None else frame_source
    grid = state.grid
    strong = source.norm() >= WEAK_Q
    if region is None:
        return grid.mask & strong
    region = np.asarray(region, dtype=bool) & grid.mask
    weak = int((region & ~strong).sum())
    if weak:
        raise RegionError(weak)
    return region


def wall_profile(state: State, region: Optional[np.ndarray] = None, frame_source: GridField = None) -> WallProfileVar:
    """Continue the eigenframe of Q over the region and project M onto it"""
    source = state.Q if frame_source is None else frame_source
    region = frame_region(state, region, frame_source)
    grid = state.grid
    sub = LatticeGrid(grid.origin, grid.h, grid.shape, mask=region)

    n = continue_directors(sub, unit_q(GridField(sub, np.where(region[..., None], source.values, 0.0))), EdgeSet.empty(sub))
    m_perp = np.stack([-n[..., 1], n[..., 0]], axis=-1)
    M = state.M.values
    u = np.stack([(M * n).sum(axis=-1), (M * m_perp).sum(axis=-1)], axis=-1)
    u[~region] = 0.0
    cuts = edge_signs(sub, n)
    if cuts.count:
        logger.debug(f"Frame flips across {cuts.count} edges")
    return WallProfileVar(u=GridField(grid, u), frame=n, region=region, frame_cuts=cuts)


def decoupled_energy(
    state: State,
    params: Params,
    frame_source: GridField = None,
    region: Optional[np.ndarray] = None,
) -> DecoupledReport:
    """Both sides of the Q/u splitting of the energy restricted to the frame region"""
    profile = wall_profile(state, region, frame_source)
    grid = state.grid
    region = profile.region
    h2 = grid.h ** 2
    eps = params.eps

    q = state.Q.values
    q_term = dirichlet_sum(q, grid, region) + h2 * float(g_eps(state.Q.norm()[region], eps, params.kappa_star).sum())

    dh, dv = profile.corrected_differences()
    sub_h = region[:, :-1] & region[:, 1:]
    sub_v = region[:-1, :] & region[1:, :]
    grad_u = 0.5 * float((dh ** 2).sum(axis=-1)[sub_h].sum() + (dv ** 2).sum(axis=-1)[sub_v].sum())
    u_term = eps * grad_u + h2 / eps * float(h_potential(profile.u.values[region], params.beta).sum())

    f = potential_f_eps(q, state.M.values, params)
    total = (
        dirichlet_sum(q, grid, region)
        + eps * dirichlet_sum(state.M.values, grid, region)
        + h2 / eps ** 2 * float(f[region].sum())
    )
    report = DecoupledReport(profile=profile, q_term=q_term, u_term=u_term, total=total)
    logger.info(
        f"Decoupling at eps={eps}: F={total:.6g}, Q-part={q_term:.6g}, u-part={u_term:.6g}, "
        f"remainder={report.remainder:.3e}"
    )
    return report
