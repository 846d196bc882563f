"""
Shared fixtures
"""
import numpy as np
import pytest

from src.geom import Domain, disk, kidney, signed_distance

PAIR = [(-0.3, 0.0), (0.3, 0.0)]


@pytest.fixture
def unit_disk() -> Domain:
    return disk()


@pytest.fixture
def kidney_domain() -> Domain:
    return kidney()


@pytest.fixture
def pair_points():
    return list(PAIR)


def random_interior_points(domain: Domain, count: int, rng: np.random.Generator, clearance: float = 0.05):
    """Points at least `clearance` inside the domain and from each other"""
    xmin, ymin, xmax, ymax = domain.bounding_box
    points = []
    while len(points) < count:
        p = (float(rng.uniform(xmin, xmax)), float(rng.uniform(ymin, ymax)))
        if signed_distance(domain, [p])[0] < clearance:
            continue
        if all(np.hypot(p[0] - a[0], p[1] - a[1]) > clearance for a in points):
            points.append(p)
    return points
