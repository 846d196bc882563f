"""
Model parameters and the normalisation constant of the coupled potential
"""
import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from src.core.exceptions import NoMinimumError, UsageError

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
KAPPA_FIT_LEVELS = (0.04, 0.02, 0.01)


def aligned_potential(s: float, lam: float, eps: float, beta: float) -> float:
    """Unshifted potential at |Q| = s, |M| = λ with M along the leading eigenvector of Q"""
    return 0.25 * (1 - s * s) ** 2 + 0.25 * eps * (1 - lam * lam) ** 2 - eps * beta * s * lam * lam / SQRT2


def _aligned_gradient(x, eps: float, beta: float) -> np.ndarray:
    s, lam = x
    ds = -(1 - s * s) * s - eps * beta * lam * lam / SQRT2
    dl = -eps * (1 - lam * lam) * lam - 2 * eps * beta * s * lam / SQRT2
    return np.array([ds, dl])


def kappa_star(beta: float) -> float:
    """Leading coefficient of κ_ε = ε κ* + o(ε)"""
    return 0.5 * (beta * beta + SQRT2 * beta)


def lambda_limit(beta: float) -> float:
    return math.sqrt(SQRT2 * beta + 1.0)


def kappa_eps(eps: float, beta: float) -> Tuple[float, Tuple[float, float]]:
    """κ_ε and the minimising (λ_{ε,β}, s_{ε,β}) of the aligned potential"""
    if eps <= 0 or beta < 0:
        raise UsageError(f"need eps > 0 and beta >= 0, got eps={eps}, beta={beta}", field="eps")

    start = np.array([1.0, lambda_limit(beta)])
    result = minimize(
        lambda x: aligned_potential(x[0], x[1], eps, beta),
        start,
        jac=lambda x: _aligned_gradient(x, eps, beta),
        method="L-BFGS-B",
        bounds=[(0.0, 4.0), (0.0, 4.0 * lambda_limit(beta))],
        options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 500},
    )
    s, lam = (float(v) for v in result.x)
    grad = float(np.max(np.abs(_aligned_gradient(result.x, eps, beta))))
    if not result.success and grad > 1e-8:
        raise NoMinimumError(f"Aligned potential minimisation failed: {result.message}")
    if s <= 1e-8 or lam <= 1e-8 or grad > 1e-7:
        raise NoMinimumError(f"No interior minimum for eps={eps}, beta={beta} (s={s:.3g}, lam={lam:.3g})")

    kappa = -float(result.fun)
    logger.debug(f"kappa_eps(eps={eps}, beta={beta}) = {kappa:.12g}, lam={lam:.10g}, s={s:.10g}")
    return kappa, (lam, s)


def fit_kappa_star(beta: float, eps_levels: Sequence[float] = None) -> float:
    """Intercept of κ_ε/ε against ε over a few ε levels"""
    levels = np.asarray(eps_levels or KAPPA_FIT_LEVELS, dtype=float)
    ratios = np.array([kappa_eps(e, beta)[0] / e for e in levels])
    _, intercept = np.polyfit(levels, ratios, 1)
    return float(intercept)


@dataclass(frozen=True)
class Params:
    eps: float
    beta: float
    kappa: float
    lam: float
    s: float
    kappa_star: float

    @classmethod
    def from_eps_beta(cls, eps: float, beta: float) -> "Params":
        kappa, (lam, s) = kappa_eps(eps, beta)
        return cls(eps=eps, beta=beta, kappa=kappa, lam=lam, s=s, kappa_star=fit_kappa_star(beta))

    @property
    def kappa_star_closed(self) -> float:
        return kappa_star(self.beta)
