"""
Lattice windings, liftings, essential boundaries and the lower-bound audit
"""
import math

import networkx as nx
import numpy as np
import pytest

from src.cli.runner import vortex_field
from src.connection import Connection, solve_min_connection
from src.core.exceptions import InconsistencyError, MalformedInputError, ResolutionError
from src.core.schemas import ArcClass, ContactKind, CorrespondenceDirection
from src.cover import apply_cover
from src.lifting import (
    GridField,
    LatticeGrid,
    PixelSet,
    audit_lower_bound,
    boundary_winding,
    construct_lifting,
    deck_ambiguity,
    detect_singularities,
    essential_boundary,
    euler_trails,
    jordan_decompose,
    la_edge_set,
    lifting_set_correspondence,
    loop_parity,
    random_pixel_set,
    segment_band,
    symdiff_boundary_check,
    verify_lower_bound,
    winding_of_values,
)
from src.lifting.jordan import ContactTag, EdgePath, classify_arcs, contact_map
from src.geom import Segment


@pytest.fixture
def grid64(unit_disk):
    return LatticeGrid.for_domain(unit_disk, n=64)


@pytest.fixture
def grid128(unit_disk):
    return LatticeGrid.for_domain(unit_disk, n=128)


@pytest.fixture
def pair_lifting(unit_disk, grid64, pair_points):
    cuts = solve_min_connection(unit_disk, pair_points)
    field = vortex_field(grid64, pair_points)
    return field, cuts, construct_lifting(field, cuts)


def test_grid_for_disk(grid64):
    assert grid64.shape == (64, 64)
    assert grid64.h == pytest.approx(2 / 63)
    assert grid64.mask[32, 32]
    assert not grid64.mask[0, 0]


def test_winding_of_sampled_circle():
    t = np.linspace(0, 2 * math.pi, 16, endpoint=False)
    assert winding_of_values(np.stack([np.cos(t), np.sin(t)], axis=1)) == (1, False)
    assert winding_of_values(np.stack([np.cos(2 * t), np.sin(2 * t)], axis=1)) == (2, True)


def square_around_centre(lo: int, hi: int):
    loop = [(lo, i) for i in range(lo, hi)]
    loop += [(j, hi) for j in range(lo, hi)]
    loop += [(hi, i) for i in range(hi, lo, -1)]
    loop += [(j, lo) for j in range(hi, lo, -1)]
    return loop


def test_loop_parity_on_a_node_square(grid64):
    loop = square_around_centre(26, 37)
    radial = GridField.from_function(grid64, lambda X, Y: np.stack([X, Y], axis=-1) / np.hypot(X, Y)[..., None])
    doubled = GridField.from_function(
        grid64, lambda X, Y: np.stack([X**2 - Y**2, 2 * X * Y], axis=-1) / (X**2 + Y**2)[..., None]
    )
    assert loop_parity(radial, loop) == (1, False)
    assert loop_parity(doubled, loop) == (2, True)


def test_coarse_loop_is_unresolvable():
    t = np.linspace(0, 2 * math.pi, 3, endpoint=False)
    with pytest.raises(ResolutionError):
        winding_of_values(np.stack([np.cos(t), np.sin(t)], axis=1))


def test_single_vortex_is_detected(grid64):
    a = (0.3, 0.1)
    field = GridField.from_function(
        grid64, lambda X, Y: np.stack([X - a[0], Y - a[1]], axis=-1) / np.hypot(X - a[0], Y - a[1])[..., None]
    )
    report = detect_singularities(field)
    assert len(report) == 1
    defect = report.defects[0]
    assert defect.winding == 1
    assert not defect.orientable
    assert math.dist(defect.center, a) <= grid64.h
    assert boundary_winding(field) == 1


def test_smooth_field_has_no_defects(grid64):
    field = GridField.constant(grid64, (1.0, 0.0))
    assert len(detect_singularities(field)) == 0
    assert boundary_winding(field) == 0


def test_vortex_pair_windings(grid64, pair_points):
    report = detect_singularities(vortex_field(grid64, pair_points))
    assert [d.winding for d in report.defects] == [1, 1]
    assert report.total_winding == 2
    assert len(report.non_orientable) == 2


def test_lifting_covers_the_field(pair_lifting, grid64):
    field, cuts, result = pair_lifting
    mask = grid64.mask
    assert np.allclose(apply_cover(result.lifting.values[mask]), field.values[mask], atol=1e-12)
    assert not result.jumps.is_empty()
    assert (result.jumps - result.band - result.core_edges()).is_empty()


def test_lifting_without_cuts_is_inconsistent(grid64, pair_points):
    field = vortex_field(grid64, pair_points)
    with pytest.raises(InconsistencyError):
        construct_lifting(field, Connection.empty(pair_points))


def test_set_lifting_roundtrip(pair_lifting, grid64):
    field, cuts, ref = pair_lifting
    A = random_pixel_set(grid64, np.random.default_rng(1))
    lifted = lifting_set_correspondence(CorrespondenceDirection.SET_TO_LIFTING, field, cuts, A, reference=ref)
    assert lifted.jumps == essential_boundary(A) ^ ref.jumps

    back = lifting_set_correspondence(CorrespondenceDirection.LIFTING_TO_SET, field, cuts, lifted.lifting, reference=ref)
    assert back == A


def test_deck_ambiguity(pair_lifting, grid64):
    field, cuts, ref = pair_lifting
    flipped = lifting_set_correspondence(
        CorrespondenceDirection.SET_TO_LIFTING, field, cuts, PixelSet.full(grid64), reference=ref
    )
    assert deck_ambiguity(ref.lifting, flipped.lifting, ref.jumps)

    X, Y = grid64.coordinates()
    blob = PixelSet(grid64, (X + 0.5) ** 2 + (Y - 0.5) ** 2 <= 0.04)
    partial = lifting_set_correspondence(CorrespondenceDirection.SET_TO_LIFTING, field, cuts, blob, reference=ref)
    assert not deck_ambiguity(ref.lifting, partial.lifting, ref.jumps)


def test_symmetric_difference_of_boundaries(grid64):
    rng = np.random.default_rng(17)
    for _ in range(50):
        A, B = random_pixel_set(grid64, rng), random_pixel_set(grid64, rng)
        assert symdiff_boundary_check(A, B)


@pytest.mark.slow
def test_symmetric_difference_on_many_pairs(grid64):
    rng = np.random.default_rng(18)
    for _ in range(500):
        A, B = random_pixel_set(grid64, rng), random_pixel_set(grid64, rng)
        assert symdiff_boundary_check(A, B)


def test_single_pixel_boundary_is_one_loop(grid64):
    cells = np.zeros(grid64.shape, dtype=bool)
    cells[32, 32] = True
    boundary = essential_boundary(PixelSet(grid64, cells))
    assert len(boundary) == 4
    loops, arcs = jordan_decompose(boundary)
    assert len(loops) == 1 and not arcs
    assert classify_arcs(loops, Connection.empty()) == [ArcClass.CLOSED]


def test_arc_taxonomy(unit_disk, pair_points):
    pair = solve_min_connection(unit_disk, pair_points)
    on_cut = ContactTag(ContactKind.CUT_CONTACT, (1, 1), frozenset({0}))
    on_other_cut = ContactTag(ContactKind.CUT_CONTACT, (2, 2), frozenset({1}))
    on_boundary = ContactTag(ContactKind.BOUNDARY_CONTACT, (0, 0))

    def arc(a, b):
        return EdgePath([(0, 0, 0)], [(0, 0), (0, 1)], 0.1, a, b)

    labels = classify_arcs(
        [arc(on_cut, on_cut), arc(on_cut, on_other_cut), arc(on_boundary, on_boundary), arc(on_boundary, on_cut)], pair
    )
    assert labels == [
        ArcClass.SAME_SEGMENT,
        ArcClass.ESSENTIAL_A,
        ArcClass.BOUNDARY_TO_BOUNDARY,
        ArcClass.ESSENTIAL_B,
    ]

    footed = solve_min_connection(unit_disk, [(0.95, 0.0)])
    assert classify_arcs([arc(on_boundary, on_cut)], footed) == [ArcClass.BOUNDARY_TOUCHING_SEGMENT]


def test_rectangle_across_the_cut_splits_into_same_segment_arcs(unit_disk, grid64, pair_points):
    cuts = solve_min_connection(unit_disk, pair_points)
    X, Y = grid64.coordinates()
    A = PixelSet(grid64, (np.abs(X) < 0.1) & (np.abs(Y) < 0.2))
    loops, arcs = jordan_decompose(essential_boundary(A), contact_map(grid64, cuts))
    assert not loops
    assert len(arcs) == 2
    assert classify_arcs(arcs, cuts) == [ArcClass.SAME_SEGMENT] * 2


def test_horizontal_segment_crosses_vertical_edges(grid64):
    band = segment_band(grid64, Segment((-0.3, 0.0), (0.3, 0.0)))
    assert not band.horizontal.any()
    # one vertical edge per lattice column strictly between the endpoints
    columns = np.sum((grid64.xs > -0.3) & (grid64.xs < 0.3))
    assert band.vertical.sum() == columns


def test_empty_set_gives_the_cut(unit_disk, grid128, pair_points):
    cuts = solve_min_connection(unit_disk, pair_points)
    A = PixelSet.empty(grid128)
    assert la_edge_set(A, cuts).length == pytest.approx(0.6, abs=2 * grid128.h)

    report = verify_lower_bound(unit_disk, pair_points, A, cuts)
    assert report.passed
    assert report.traces_connection
    assert report.trails == 1


def test_lower_bound_is_attained(unit_disk, grid64):
    # endpoints half a spacing beyond lattice columns and the segment between node rows
    h = grid64.h
    y = grid64.ys[31] + h / 2
    points = [(grid64.xs[22] - h / 2, y), (grid64.xs[41] + h / 2, y)]
    cuts = solve_min_connection(unit_disk, points)
    assert cuts.total_length == pytest.approx(20 * h)

    report = verify_lower_bound(unit_disk, points, PixelSet.empty(grid64), cuts)
    assert report.la_length == pytest.approx(report.l_omega, abs=1e-12)
    assert report.margin == pytest.approx(report.allowance, abs=1e-12)
    assert report.passed


def test_audit_passes_on_random_sets(unit_disk, pair_points):
    summary = audit_lower_bound(unit_disk, pair_points, samples=20, seed=7, grid_n=64, n_jobs=1)
    assert summary.all_passed
    assert summary.min_margin >= 0


def test_audit_is_reproducible(unit_disk, pair_points):
    first = audit_lower_bound(unit_disk, pair_points, samples=5, seed=3, grid_n=48, n_jobs=1)
    second = audit_lower_bound(unit_disk, pair_points, samples=5, seed=3, grid_n=48, n_jobs=2)
    assert [r.la_length for r in first.reports] == [r.la_length for r in second.reports]


@pytest.mark.slow
def test_audit_thousand_sets(unit_disk, pair_points):
    summary = audit_lower_bound(unit_disk, pair_points, samples=1000, seed=7, grid_n=128)
    assert summary.passed == 1000


def test_trail_partition():
    graph = nx.MultiGraph([("a", "b"), ("b", "c"), ("b", "d"), ("b", "e")])
    partition = euler_trails(graph)
    assert len(partition.trails) == 2
    assert partition.edge_count == 4
    assert {n for t in partition.trails for n in t.endpoints} == {"a", "c", "d", "e"}

    cycle = euler_trails(nx.MultiGraph([(0, 1), (1, 2), (2, 0)]))
    assert len(cycle.closed) == 1 and not cycle.trails

    discarded = euler_trails(nx.MultiGraph([("x", "y")]), boundary={"x", "y"})
    assert len(discarded.discarded) == 1


def test_trail_partition_rejects_loops():
    with pytest.raises(MalformedInputError):
        euler_trails(nx.MultiGraph([(0, 0)]))
