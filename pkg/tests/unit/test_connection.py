"""
Minimal connections: subset DP, exhaustive oracle and diagnostics
"""
import math

import numpy as np
import pytest

from src.connection import (
    Connection,
    minimality_diagnostics,
    oracle_min_connection,
    solve_min_connection,
    validate_connection,
)
from src.core.exceptions import CapacityError, DomainError
from src.core.schemas import SegmentKind
from tests.conftest import random_interior_points


def test_close_pair_is_joined(unit_disk, pair_points):
    c = solve_min_connection(unit_disk, pair_points)
    assert c.total_length == pytest.approx(0.6, abs=1e-12)
    assert [s.kind for s in c.segments] == [SegmentKind.PAIR]


def test_far_pair_goes_to_the_boundary(unit_disk):
    c = solve_min_connection(unit_disk, [(-0.9, 0.0), (0.9, 0.0)])
    assert c.total_length == pytest.approx(0.2, abs=1e-3)
    assert {s.kind for s in c.segments} == {SegmentKind.BOUNDARY}


def test_empty_and_single_point(unit_disk):
    assert solve_min_connection(unit_disk, []).total_length == 0.0
    single = solve_min_connection(unit_disk, [(0.0, 0.5)])
    assert single.total_length == pytest.approx(0.5, abs=1e-3)
    assert single.incidence() == {0: 1}


def test_input_errors(unit_disk):
    with pytest.raises(DomainError):
        solve_min_connection(unit_disk, [(0.1, 0.1), (0.1, 0.1)])
    with pytest.raises(DomainError):
        solve_min_connection(unit_disk, [(1.0, 0.0)])
    with pytest.raises(CapacityError):
        solve_min_connection(unit_disk, [(0.01 * k, 0.0) for k in range(17)])


def _instances(domain, count, seed, max_points=5):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        p = int(rng.integers(1, max_points + 1))
        yield random_interior_points(domain, p, rng)


@pytest.mark.parametrize("shape", ["unit_disk", "kidney_domain"])
def test_dp_matches_oracle(shape, request):
    domain = request.getfixturevalue(shape)
    for points in _instances(domain, 15, seed=11):
        dp = solve_min_connection(domain, points)
        oracle = oracle_min_connection(domain, points)
        assert dp.total_length == pytest.approx(oracle.total_length, abs=1e-12)


@pytest.mark.parametrize("shape", ["unit_disk", "kidney_domain"])
def test_solver_output_passes_diagnostics(shape, request):
    domain = request.getfixturevalue(shape)
    for points in _instances(domain, 15, seed=5):
        c = solve_min_connection(domain, points)
        assert validate_connection(domain, points, c).passed
        report = minimality_diagnostics(domain, c)
        assert report.passed, report.details
        assert report.max_angle <= 1e-3


@pytest.mark.slow
@pytest.mark.parametrize("shape", ["unit_disk", "kidney_domain"])
def test_dp_matches_oracle_many_instances(shape, request):
    domain = request.getfixturevalue(shape)
    for points in _instances(domain, 100, seed=2024, max_points=6):
        dp = solve_min_connection(domain, points)
        assert dp.total_length == pytest.approx(oracle_min_connection(domain, points).total_length, abs=1e-12)
        assert minimality_diagnostics(domain, dp).passed


@pytest.mark.parametrize("shape", ["unit_disk", "kidney_domain"])
def test_similarity_scales_the_total(shape, request):
    domain = request.getfixturevalue(shape)
    scale, angle, shift = 2.5, 0.7, (1.0, -3.0)
    moved = domain.transformed(scale=scale, angle=angle, shift=shift)
    c, s = math.cos(angle), math.sin(angle)

    def move(p):
        return (scale * (c * p[0] - s * p[1]) + shift[0], scale * (s * p[0] + c * p[1]) + shift[1])

    for points in _instances(domain, 8, seed=31):
        original = solve_min_connection(domain, points).total_length
        image = solve_min_connection(moved, [move(p) for p in points]).total_length
        assert image == pytest.approx(scale * original, rel=1e-7)


@pytest.mark.parametrize("shape", ["unit_disk", "kidney_domain"])
def test_every_point_has_odd_incidence(shape, request):
    domain = request.getfixturevalue(shape)
    for points in _instances(domain, 15, seed=8):
        incidence = solve_min_connection(domain, points).incidence()
        assert set(incidence) == set(range(len(points)))
        assert all(n % 2 == 1 for n in incidence.values())


def test_missing_segments_fail_parity(unit_disk, pair_points):
    report = validate_connection(unit_disk, pair_points, Connection.empty(pair_points))
    assert not report.parity
    assert not report.passed


def test_document_roundtrip(kidney_domain):
    points = [(0.25, 0.55), (0.25, -0.55), (-1.0, 0.2)]
    c = solve_min_connection(kidney_domain, points)
    doc = c.to_document(kidney_domain.name)
    back = Connection.from_document(doc)
    assert back.total_length == pytest.approx(c.total_length)
    assert back.to_document(kidney_domain.name) == doc
