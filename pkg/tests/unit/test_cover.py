"""
Double cover z ↦ z², deck transform and the pairing Ξ
"""
import math

import numpy as np
import pytest

from src.core.exceptions import CoverError
from src.cover import apply_cover, deck_transform, directors_of_tensor, pairing_xi
from src.cover.double_cover import director_from_angle, q_from_angle, q_to_tensor


@pytest.fixture
def angles():
    rng = np.random.default_rng(3)
    return rng.uniform(-math.pi, math.pi, 500)


def test_cover_doubles_angles(angles):
    q = apply_cover(director_from_angle(angles))
    assert np.allclose(q, q_from_angle(angles), atol=1e-12)


def test_deck_transform_is_invisible_to_the_cover(angles):
    v = director_from_angle(angles)
    assert np.allclose(apply_cover(deck_transform(v)), apply_cover(v), atol=1e-12)


def test_roots_cover_the_tensor(angles):
    q = q_from_angle(angles)
    v, w = directors_of_tensor(q)
    assert np.all(v[..., 0] >= 0)
    assert np.allclose(w, -v)
    assert np.allclose(apply_cover(v), q, atol=1e-12)


@pytest.mark.parametrize("q", [(-1.0, -0.0), (-1.0, 0.0), (-1.0, -1e-17)])
def test_vertical_root_points_up(q):
    v, w = directors_of_tensor(np.array(q))
    assert v == pytest.approx(np.array([0.0, 1.0]), abs=1e-12)
    assert w == pytest.approx(np.array([0.0, -1.0]), abs=1e-12)


def test_non_unit_input_rejected():
    with pytest.raises(CoverError):
        apply_cover([1.0, 0.1])
    with pytest.raises(CoverError):
        directors_of_tensor([[0.5, 0.0]])


def test_pairing_xi_values():
    v = np.array([1.0, 0.0])
    w = np.array([0.0, 1.0])
    assert pairing_xi(v, v) == pytest.approx(1.0)
    assert pairing_xi(v, -v) == pytest.approx(-1.0)
    # orthogonal directors cover antipodal q, beyond the cutoff
    assert pairing_xi(v, w) == pytest.approx(0.0)


def test_pairing_xi_sign_is_the_sheet(angles):
    v = director_from_angle(angles)
    near = director_from_angle(angles + 0.1)
    assert np.all(pairing_xi(v, near) > 0)
    assert np.all(pairing_xi(v, -near) < 0)


def test_tensor_is_traceless_and_symmetric(angles):
    Q = q_to_tensor(q_from_angle(angles))
    assert np.allclose(Q[..., 0, 0] + Q[..., 1, 1], 0.0)
    assert np.allclose(Q[..., 0, 1], Q[..., 1, 0])
    # unit q has |Q|² = 1
    assert np.allclose((Q ** 2).sum(axis=(-1, -2)), 1.0)
