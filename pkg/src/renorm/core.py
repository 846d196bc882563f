"""
Vortex core energy from the radial Ginzburg-Landau problem on the unit disc
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.optimize import minimize

from src.core.config import settings
from src.core.exceptions import ConvergenceError, UsageError

logger = logging.getLogger(__name__)


@dataclass
class RadialProfile:
    """Minimizing f on [0, 1] with f(0) = 0 and f(1) = 1"""
    eps: float
    r: np.ndarray
    f: np.ndarray
    energy: float

    def __call__(self, rho) -> np.ndarray:
        return np.interp(np.asarray(rho, dtype=float), self.r, self.f, right=1.0)

    @property
    def shifted(self) -> float:
        """γ(ε) − π|log ε|"""
        return self.energy - math.pi * abs(math.log(self.eps))

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.f) >= -1e-9))


@dataclass
class CoreEnergyLimit:
    eps_levels: List[float]
    shifted: List[float]
    gamma_star: float

    @property
    def differences(self) -> List[float]:
        return [abs(b - a) for a, b in zip(self.shifted, self.shifted[1:])]

    @property
    def cauchy_ratios(self) -> List[float]:
        d = self.differences
        return [a / b if b > 0 else math.inf for a, b in zip(d, d[1:])]

    def table(self) -> List[dict]:
        return [{"eps": e, "gamma_shifted": g} for e, g in zip(self.eps_levels, self.shifted)]


def _radial_energy(inner: np.ndarray, eps: float, r: np.ndarray):
    """Energy ∫₀¹ (½(f′² + f²/r²) + (f²−1)²/4ε²) 2πr dr on midpoints, with its gradient"""
    f = np.concatenate([[0.0], inner, [1.0]])
    dr = np.diff(r)
    rm = 0.5 * (r[:-1] + r[1:])
    fm = 0.5 * (f[:-1] + f[1:])
    df = np.diff(f) / dr
    w = 2 * math.pi * rm * dr

    density = 0.5 * df ** 2 + 0.5 * fm ** 2 / rm ** 2 + (fm ** 2 - 1) ** 2 / (4 * eps * eps)
    energy = float((w * density).sum())

    d_df = w * df / dr
    d_fm = 0.5 * w * (fm / rm ** 2 + (fm ** 2 - 1) * fm / (eps * eps))
    grad = np.zeros_like(f)
    grad[:-1] += -d_df + d_fm
    grad[1:] += d_df + d_fm
    return energy, grad[1:-1]


def core_energy(eps: float, nodes: int = None) -> RadialProfile:
    """γ(ε): the minimal Ginzburg-Landau energy of the unit disc with datum x/|x|"""
    if not 0 < eps < 0.5:
        raise UsageError(f"core energy needs 0 < eps < 1/2, got {eps}", field="eps")
    n = nodes or settings.radial_nodes
    r = np.linspace(0.0, 1.0, n + 1)
    start = np.tanh(r[1:-1] / eps)

    result = minimize(
        _radial_energy,
        start,
        args=(eps, r),
        jac=True,
        method="L-BFGS-B",
        bounds=[(0.0, 1.0)] * (n - 1),
        options={"maxiter": 20000, "ftol": 1e-15, "gtol": 1e-10},
    )
    if result.status == 1:
        raise ConvergenceError(f"radial solve for eps={eps} hit the iteration cap", error_code="renorm.RADIAL")

    f = np.concatenate([[0.0], result.x, [1.0]])
    profile = RadialProfile(eps=eps, r=r, f=f, energy=float(result.fun))
    logger.debug(f"gamma({eps}) = {profile.energy:.10g}, shifted {profile.shifted:.10g}, {result.nit} iterations")
    return profile


def core_energy_limit(eps_levels: Sequence[float] = None, nodes: int = None) -> CoreEnergyLimit:
    """γ* from γ(ε) − π|log ε| over a few ε, extrapolated linearly in ε²"""
    levels = sorted(eps_levels or settings.core_eps_levels, reverse=True)
    shifted = [core_energy(e, nodes).shifted for e in levels]
    e2 = np.asarray(levels) ** 2
    _, gamma_star = np.polyfit(e2, shifted, 1)
    logger.info(f"Core energy limit {gamma_star:.8g} from eps levels {levels}")
    return CoreEnergyLimit(eps_levels=list(levels), shifted=shifted, gamma_star=float(gamma_star))
