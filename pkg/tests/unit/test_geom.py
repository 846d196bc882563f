"""
Domains, containment, projection and clipping
"""
import math

import numpy as np
import pytest

from src.core.exceptions import DomainError, UsageError
from src.core.schemas import Containment
from src.geom import (
    Domain,
    Segment,
    boundary_geodesic,
    boundary_projection,
    chord_arc_constant,
    classify,
    clip_to_domain,
    contains,
    domain_factory,
    ellipse,
    rounded_square,
    segment_admissible,
    signed_distance,
)
from src.geom.domain_factory import save_domain


def test_disk_containment(unit_disk):
    assert contains(unit_disk, (0.0, 0.0)) == Containment.INSIDE
    assert contains(unit_disk, (1.0, 0.0)) == Containment.BOUNDARY
    assert contains(unit_disk, (2.0, 0.0)) == Containment.OUTSIDE


def test_classify_is_vectorised(unit_disk):
    codes = classify(unit_disk, [(0.0, 0.0), (2.0, 0.0), (0.0, 0.5)])
    assert codes.tolist() == [1, -1, 1]


def test_signed_distance_sign(unit_disk):
    d = signed_distance(unit_disk, [(0.0, 0.0), (2.0, 0.0)])
    assert d[0] == pytest.approx(1.0, abs=1e-3)
    assert d[1] == pytest.approx(-1.0, abs=1e-9)


def test_projection_of_interior_point(unit_disk):
    proj = boundary_projection(unit_disk, (0.3, 0.0))
    assert proj.distance == pytest.approx(0.7, abs=1e-3)
    assert proj.foot[0] == pytest.approx(1.0, abs=1e-3)
    assert proj.inward_normal[0] == pytest.approx(-1.0, abs=1e-3)


def test_admissibility_and_clipping(unit_disk):
    inside = Segment((-0.5, 0.0), (0.5, 0.0))
    through = Segment((-2.0, 0.0), (2.0, 0.0))
    assert segment_admissible(unit_disk, inside)
    assert not segment_admissible(unit_disk, through)

    pieces = clip_to_domain(unit_disk, through)
    assert len(pieces) == 1
    assert pieces[0].length == pytest.approx(2.0, abs=1e-9)


def test_kidney_chord_leaves_domain(kidney_domain):
    chord = Segment((0.25, 0.55), (0.25, -0.55))
    assert not segment_admissible(kidney_domain, chord)
    pieces = clip_to_domain(kidney_domain, chord)
    assert len(pieces) == 2
    assert all(segment_admissible(kidney_domain, p) for p in pieces)


def test_degenerate_segment_rejected():
    with pytest.raises(DomainError):
        Segment((0.1, 0.1), (0.1, 0.1))


def test_self_intersecting_boundary_rejected():
    with pytest.raises(DomainError):
        Domain([(0, 0), (1, 1), (1, 0), (0, 1)], validate=True)


def test_clockwise_input_is_reoriented():
    verts = ellipse(2.0, 1.0).vertices[::-1]
    domain = Domain(verts, name="cw")
    assert domain.area == pytest.approx(ellipse(2.0, 1.0).area)
    assert domain.area > 0


def test_chord_arc_constant_of_disk(unit_disk):
    assert chord_arc_constant(unit_disk) == pytest.approx(math.pi / 2, abs=1e-3)


def test_boundary_geodesic_half_circle(unit_disk):
    assert boundary_geodesic(unit_disk, (1.0, 0.0), (-1.0, 0.0)) == pytest.approx(unit_disk.perimeter / 2)


def test_boundary_geodesic_needs_boundary_points(unit_disk):
    with pytest.raises(DomainError):
        boundary_geodesic(unit_disk, (0.0, 0.0), (1.0, 0.0))


def test_factory_shapes():
    assert domain_factory.get_domain("disk").name == "disk"
    assert domain_factory.get_domain("ellipse:2,1").bounding_box[2] == pytest.approx(2.0)
    assert domain_factory.get_domain("rounded-square").name == "rounded-square"
    with pytest.raises(UsageError):
        domain_factory.get_domain("triangle")


def test_domain_file_roundtrip(tmp_path):
    domain = rounded_square()
    path = tmp_path / "square.json"
    save_domain(domain, path)
    loaded = domain_factory.get_domain(str(path))
    assert np.allclose(loaded.vertices, domain.vertices)
    assert loaded.perimeter == pytest.approx(domain.perimeter)


def test_transformed_scales_area(unit_disk):
    scaled = unit_disk.transformed(scale=2.0, angle=0.3, shift=(1.0, -1.0))
    assert scaled.area == pytest.approx(4 * unit_disk.area)
