"""
The double covering z ↦ z² of the circle in director / q-vector form.

Directors v are unit 2-vectors; q = (v₁² − v₂², 2v₁v₂) is the q-vector of the
traceless tensor √2(v⊗v − I/2). Every function broadcasts over leading axes.
"""
import math
from typing import Tuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import CoverError

Director = np.ndarray
QTensor = np.ndarray

AXIS_TOLERANCE = 1e-12


def _check_unit(x: np.ndarray, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise CoverError(f"{what} must have a trailing axis of length 2, got shape {x.shape}")
    norms = np.hypot(x[..., 0], x[..., 1])
    bad = np.abs(norms - 1.0) > settings.unit_tolerance * max(1.0, float(np.max(norms, initial=1.0)))
    if np.any(bad):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise CoverError(f"{what} is not unit length (|norm − 1| up to {worst:.3e})")
    return x


def apply_cover(v) -> QTensor:
    """Π(v): angle doubling"""
    v = _check_unit(v, "director")
    return np.stack([v[..., 0] ** 2 - v[..., 1] ** 2, 2 * v[..., 0] * v[..., 1]], axis=-1)


def deck_transform(v) -> Director:
    """Φ(v) = −v, the other preimage under the cover"""
    return -_check_unit(v, "director")


def covered_angle_distance(v1, v2) -> np.ndarray:
    """Angular distance on S¹ between Π(v1) and Π(v2), in [0, π]"""
    q1, q2 = apply_cover(v1), apply_cover(v2)
    cross = q1[..., 0] * q2[..., 1] - q1[..., 1] * q2[..., 0]
    dot = q1[..., 0] * q2[..., 0] + q1[..., 1] * q2[..., 1]
    return np.abs(np.arctan2(cross, dot))


def pairing_xi(v1, v2, delta0: float = None):
    """Ξ(v1, v2) = sign · (1 − dist(Πv1, Πv2)/δ₀)₊.

    sign is +1 when v1 is at least as close to v2 as to −v2 (that is v1·v2 ≥ 0).
    """
    delta0 = settings.xi_cutoff if delta0 is None else delta0
    v1 = _check_unit(v1, "director")
    v2 = _check_unit(v2, "director")
    dist = covered_angle_distance(v1, v2)
    sign = np.where((v1 * v2).sum(axis=-1) >= 0, 1.0, -1.0)
    xi = sign * np.maximum(0.0, 1.0 - dist / delta0)
    return float(xi) if np.ndim(xi) == 0 else xi


def directors_of_tensor(q) -> Tuple[Director, Director]:
    """The two square roots ±v of a unit q, first root with v₁ > 0 (or v₁ = 0, v₂ > 0)"""
    q = _check_unit(q, "q-tensor") + 0.0  # −0.0 becomes 0.0
    half = 0.5 * np.arctan2(q[..., 1], q[..., 0])
    v = np.stack([np.cos(half), np.sin(half)], axis=-1)
    on_axis = np.abs(v[..., 0]) <= AXIS_TOLERANCE
    flip = np.where(on_axis, v[..., 1] < 0, v[..., 0] < 0)
    v = np.where(flip[..., None], -v, v)
    return v, -v


def director_from_angle(theta) -> Director:
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def q_from_angle(theta) -> QTensor:
    """q-vector of the director at angle θ (angle doubled)"""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(2 * theta), np.sin(2 * theta)], axis=-1)


def q_to_tensor(q) -> np.ndarray:
    """Symmetric traceless 2×2 tensor with q = √2 (Q₁₁, Q₁₂)"""
    q = np.asarray(q, dtype=float)
    a, b = q[..., 0] / math.sqrt(2), q[..., 1] / math.sqrt(2)
    return np.stack([np.stack([a, b], axis=-1), np.stack([b, -a], axis=-1)], axis=-2)
