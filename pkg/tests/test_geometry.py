import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dirichlet_morse.errors import DegenerateInput
from dirichlet_morse.geometry import (
    TWO_PI,
    BoundaryPoint,
    CrossingKind,
    DirectedGeodesic,
    Isometry,
    Point,
    Segment,
    Side,
    apply,
    apply_geodesic,
    crosses,
    distance,
    geodesic_through,
    mink,
    perpendicular_bisector,
    side_of,
)

radii = st.floats(0.0, 0.95)
angles = st.floats(0.0, TWO_PI, exclude_max=True)
disk_points = st.builds(lambda r, t: Point.from_complex(r * cmath.exp(1j * t)), radii, angles)


def _isometry(shift, log_scale, turn):
    # z -> e^s z + x after a rotation about i
    c, s = math.cos(turn / 2), math.sin(turn / 2)
    k = math.exp(log_scale / 2)
    return Isometry(k, shift / k, 0.0, 1 / k) @ Isometry(c, s, -s, c)


isometries = st.builds(_isometry, st.floats(-3, 3), st.floats(-2, 2), angles)


def half_plane_distance(z, w):
    return math.acosh(1 + abs(z - w) ** 2 / (2 * z.imag * w.imag))


def test_distance_matches_half_plane_formula():
    z, w = 0.3 + 1.2j, -1.1 + 0.4j
    p, q = Point.from_half_plane(z), Point.from_half_plane(w)
    assert distance(p, q) == pytest.approx(half_plane_distance(z, w), rel=1e-12)


def test_modular_vertex_coordinates():
    # disk image of e^{i pi/3} under the Cayley map: a point on the imaginary axis
    p = Point.from_half_plane(complex(0.5, math.sqrt(3) / 2))
    assert p.half_plane == pytest.approx(complex(0.5, math.sqrt(3) / 2), abs=1e-14)
    assert distance(Point.from_half_plane(1j), p) == pytest.approx(math.acosh(2 / math.sqrt(3)), rel=1e-12)


def test_boundary_half_plane_round_trip():
    for x in (-3.0, -0.5, 0.0, 0.5, 7.25):
        assert BoundaryPoint.from_half_plane(x).half_plane == pytest.approx(x, abs=1e-12)
    assert math.isinf(BoundaryPoint.from_half_plane(math.inf).half_plane)
    assert math.isinf(BoundaryPoint(1e-15).half_plane)


def test_point_outside_disk_rejected():
    with pytest.raises(DegenerateInput):
        Point.checked(1.5 + 0j)
    with pytest.raises(DegenerateInput, match="too close"):
        Point.checked(1 - 1e-14)


def test_mobius_action_agrees_with_matrix():
    g = Isometry(2.0, 1.0, 1.0, 1.0)
    z = 0.25 + 0.75j
    assert g.act_half_plane(z) == pytest.approx((2 * z + 1) / (z + 1), abs=1e-14)
    assert apply(g, Point.from_half_plane(z)).half_plane == pytest.approx((2 * z + 1) / (z + 1), abs=1e-12)


def test_long_products_keep_a_valid_isometry():
    t = Isometry(1, 1, 0, 1)
    s = Isometry(0, -1, 1, 0)
    g = Isometry.identity()
    for _ in range(60):
        g = g @ t @ s @ t
    assert g.a * g.d - g.b * g.c == pytest.approx(1.0, rel=1e-6)


def test_orientation_convention():
    # left of the diameter from pi to 0 is the upper half-disk
    gamma = DirectedGeodesic.from_angles(math.pi, 0.0)
    up = side_of(gamma, Point.from_complex(0.5j))
    down = side_of(gamma, Point.from_complex(-0.5j))
    assert {up, down} == {Side.LEFT, Side.RIGHT}
    # travelling left to right with the upper half on the left
    assert up is Side.LEFT
    assert side_of(gamma, Point.from_complex(0.3 + 0j)) is Side.ON


def test_geodesic_needs_distinct_ends():
    with pytest.raises(DegenerateInput):
        DirectedGeodesic.from_angles(1.0, 1.0)


def test_crossing_kinds():
    gamma = DirectedGeodesic.from_angles(math.pi, 0.0)
    across = Segment.between(Point.from_complex(0.4j), Point.from_complex(-0.4j))
    beside = Segment.between(Point.from_complex(0.2 + 0.4j), Point.from_complex(-0.2 + 0.5j))
    touching = Segment.between(Point.from_complex(0j), Point.from_complex(0.5j))
    assert crosses(gamma, across).kind is CrossingKind.YES
    assert crosses(gamma, across).point.z == pytest.approx(0j, abs=1e-12)
    assert crosses(gamma, beside).kind is CrossingKind.NO
    assert crosses(gamma, touching).kind is CrossingKind.TOUCHES


@given(disk_points, disk_points, isometries)
@settings(max_examples=80, deadline=None)
def test_isometries_preserve_distance(p, q, g):
    assert abs(distance(apply(g, p), apply(g, q)) - distance(p, q)) < 1e-9


@given(disk_points, disk_points, disk_points)
@settings(max_examples=80, deadline=None)
def test_triangle_inequality(p, q, r):
    assert distance(p, r) <= distance(p, q) + distance(q, r) + 1e-9


@given(disk_points)
def test_disk_half_plane_round_trip(p):
    assert Point.from_half_plane(p.half_plane).z == pytest.approx(p.z, abs=1e-10)
    assert mink(p.vec, p.vec) == pytest.approx(-1.0, rel=1e-9)


@given(angles, angles, disk_points, isometries)
@settings(max_examples=80, deadline=None)
def test_sides_are_invariant(a, b, p, g):
    assume(min(abs(a - b), TWO_PI - abs(a - b)) > 1e-3)
    gamma = DirectedGeodesic.from_angles(a, b)
    s = side_of(gamma, p, tol=1e-6)
    assume(s is not Side.ON)
    assert side_of(apply_geodesic(g, gamma), apply(g, p), tol=1e-9) is s
    assert side_of(gamma.reversed(), p, tol=1e-9) is not s


@given(disk_points, disk_points, disk_points)
@settings(max_examples=80, deadline=None)
def test_bisector_half_plane_is_the_closer_side(p, q, x):
    assume(distance(p, q) > 1e-3)
    assume(abs(distance(x, p) - distance(x, q)) > 1e-6)
    h = perpendicular_bisector(p, q)
    assert h.contains(x) == (distance(x, p) < distance(x, q))


@given(disk_points, disk_points)
@settings(max_examples=60, deadline=None)
def test_geodesic_through_contains_both(p, q):
    assume(distance(p, q) > 1e-4)
    gamma = geodesic_through(p, q)
    assert side_of(gamma, p, tol=1e-8) is Side.ON
    assert side_of(gamma, q, tol=1e-8) is Side.ON
    # p is its own nearest point on the line
    assert np.isclose(distance(Point.from_vector(gamma.closest_point(p.vec)), p), 0, atol=1e-7)


@given(isometries, isometries)
@settings(max_examples=60, deadline=None)
def test_composition_is_action_composition(g, h):
    z = 0.3 + 0.9j
    assert (g @ h).act_half_plane(z) == pytest.approx(g.act_half_plane(h.act_half_plane(z)), rel=1e-8, abs=1e-8)
    p = Point.from_complex(0.2 - 0.4j)
    assert abs(apply(g @ h, p).z - apply(g, apply(h, p)).z) < 1e-10
    assert (g @ g.inverse()).is_identity(1e-8)


def test_tolerance_overrides_are_scoped():
    from dirichlet_morse.tolerances import Tolerances, current, use_tolerances

    gamma = DirectedGeodesic.from_angles(math.pi, 0.0)
    p = Point.from_complex(1e-7j)
    assert side_of(gamma, p) is Side.LEFT
    with use_tolerances(on=1e-3) as tol:
        assert tol.on == 1e-3
        assert side_of(gamma, p) is Side.ON
    assert current() == Tolerances()
    with pytest.raises(ValueError):
        Tolerances(on=0.0)


@given(disk_points, disk_points, st.floats(-4, 4))
@settings(max_examples=60, deadline=None)
def test_bisector_points_are_equidistant(p, q, t):
    assume(distance(p, q) > 1e-3)
    h = perpendicular_bisector(p, q)
    m = Point.from_vector(h.carrier.closest_point(p.vec))
    x = Point.from_vector(h.carrier.point_at(m.vec, t))
    assert abs(distance(x, p) - distance(x, q)) < 1e-9
    assert h.contains(p) and not h.contains(q)


@given(angles, angles, disk_points, disk_points, isometries)
@settings(max_examples=60, deadline=None)
def test_crossing_is_equivariant(a, b, p, q, g):
    assume(min(abs(a - b), TWO_PI - abs(a - b)) > 1e-3 and distance(p, q) > 1e-3)
    gamma = DirectedGeodesic.from_angles(a, b)
    s = Segment.between(p, q)
    assume(all(abs(mink(e.vec, gamma.normal)) > 1e-6 for e in (p, q)))
    c1 = crosses(gamma, s)
    c2 = crosses(apply_geodesic(g, gamma), Segment.between(apply(g, p), apply(g, q)))
    assert c1.kind is c2.kind
    if c1.kind is CrossingKind.YES:
        assert distance(apply(g, c1.point), c2.point) < 1e-9
