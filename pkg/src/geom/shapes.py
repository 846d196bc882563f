"""
Built-in smooth domains
"""
import math

import numpy as np

from src.geom.constants import (
    DEFAULT_VERTICES,
    KIDNEY_DIMPLE,
    ROUNDED_SQUARE_HALF,
    ROUNDED_SQUARE_RADIUS,
)
from src.geom.domain import Domain


def disk(radius: float = 1.0, center=(0.0, 0.0), n: int = DEFAULT_VERTICES, h: float = None) -> Domain:
    theta = 2 * np.pi * np.arange(n) / n
    verts = np.stack([center[0] + radius * np.cos(theta), center[1] + radius * np.sin(theta)], axis=1)
    return Domain(verts, name="disk", h=h)


def ellipse(a: float, b: float, n: int = DEFAULT_VERTICES, h: float = None) -> Domain:
    theta = 2 * np.pi * np.arange(n) / n
    verts = np.stack([a * np.cos(theta), b * np.sin(theta)], axis=1)
    return Domain(verts, name=f"ellipse:{a:g},{b:g}", h=h)


def kidney(n: int = DEFAULT_VERTICES, dimple: float = KIDNEY_DIMPLE, h: float = None) -> Domain:
    """Non-convex limaçon r(θ) = 1 − dimple·cos θ, dimple < 1.

    The concavity faces +x; its innermost boundary point is (1 − dimple, 0).
    """
    theta = 2 * np.pi * np.arange(n) / n
    r = 1.0 - dimple * np.cos(theta)
    verts = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=1)
    return Domain(verts, name="kidney", h=h)


def rounded_square(
    half: float = ROUNDED_SQUARE_HALF,
    radius: float = ROUNDED_SQUARE_RADIUS,
    n: int = DEFAULT_VERTICES,
    h: float = None,
) -> Domain:
    """Square [−half, half]² with corners rounded to the given radius.

    Vertices are spread evenly in arc length.
    """
    inner = half - radius
    straight = 2 * inner
    quarter = 0.5 * math.pi * radius
    side = straight + quarter
    perimeter = 4 * side
    s = perimeter * np.arange(n) / n

    verts = np.empty((n, 2))
    for k, value in enumerate(s):
        q, rem = divmod(value, side)
        q = int(q) % 4
        rot = q * math.pi / 2
        c, sn = math.cos(rot), math.sin(rot)
        if rem < straight:
            # right side going up, rotated by q quarter turns
            local = (half, -inner + rem)
        else:
            phi = (rem - straight) / radius
            local = (inner + radius * math.cos(phi), inner + radius * math.sin(phi))
        verts[k] = (c * local[0] - sn * local[1], sn * local[0] + c * local[1])
    return Domain(verts, name="rounded-square", h=h)
