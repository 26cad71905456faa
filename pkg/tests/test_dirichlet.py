import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirichlet_morse import Point, build_dirichlet, build_stable_dirichlet, get_preset, load_group_file, orbit
from dirichlet_morse.dirichlet import copy_of_domain, domain_metrics, proximity_epsilon
from dirichlet_morse.errors import DegenerateInput, FixedBasePoint, NoFiniteVertices, UsageError
from dirichlet_morse.geometry import Isometry, Side, side_of
from dirichlet_morse.group import GeneratorAlphabet


# ---- group ---------------------------------------------------------------


def test_involutions_are_their_own_inverse_letter():
    a = get_preset("modular")
    assert [l.name for l in a.letters] == ["S", "T", "T⁻¹"]
    assert a.inverse_of("S") == "S"
    assert a.inverse_of("T⁻¹") == "T"


def test_modular_relations():
    a = get_preset("modular")
    assert a.evaluate("S S".split()).is_identity()
    assert a.evaluate("S T S T S T".split()).is_identity()
    assert not a.evaluate("S T".split()).is_identity()


def test_reduce_and_invert():
    a = get_preset("ideal-square")
    w = ("A", "B", "B⁻¹", "A⁻¹", "B")
    assert a.reduce(w) == ("B",)
    assert a.invert_word(("A", "B⁻¹")) == ("B", "A⁻¹")
    g = a.evaluate(("A", "B⁻¹"))
    assert (g @ a.evaluate(a.invert_word(("A", "B⁻¹")))).is_identity(1e-9)


@given(st.lists(st.sampled_from(["A", "A⁻¹", "B", "B⁻¹"]), max_size=12))
def test_reduction_keeps_the_element(word):
    a = get_preset("ideal-square")
    r = a.reduce(word)
    assert a.evaluate(word).close_to(a.evaluate(r), 1e-6)
    assert all(a.inverse_of(x) != y for x, y in zip(r, r[1:]))


def test_bad_generators_rejected():
    with pytest.raises(DegenerateInput):
        GeneratorAlphabet.from_pairs([("A", Isometry.identity())])
    with pytest.raises(DegenerateInput):
        GeneratorAlphabet.from_pairs([("A", Isometry(1, 1, 0, 1)), ("A", Isometry(1, 0, 1, 1))])
    with pytest.raises(UsageError):
        get_preset("square")


def test_group_file_round_trip(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"generators": [{"name": "S", "matrix": [[0, -1], [1, 0]]},
                                               {"name": "T", "matrix": [[1, 1], [0, 1]]}]}))
    a = load_group_file(path)
    d = build_stable_dirichlet(a, Point.from_half_plane(2j))
    assert len(d.edges) == 3
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"name": "S"}]))
    with pytest.raises(UsageError):
        load_group_file(bad)


def test_orbit_of_fixed_point_is_rejected():
    with pytest.raises(FixedBasePoint):
        orbit(get_preset("modular"), Point.from_half_plane(1j), 3)


def test_orbit_points_are_distinct():
    o = orbit(get_preset("modular"), Point.from_half_plane(2j), 4)
    zs = np.array([e.image.z for e in o.entries])
    gaps = np.abs(zs[:, None] - zs[None, :]) + np.eye(len(zs))
    assert gaps.min() > 1e-7


# ---- domains -------------------------------------------------------------


def test_modular_metrics(modular):
    m = proximity_epsilon(modular)
    assert m.phi_max == pytest.approx(math.pi / 3, abs=1e-9)
    # the finite edge runs between the two order-3 points: length log 3
    assert m.a_min == pytest.approx(math.log(3), abs=1e-9)
    assert m.epsilon == pytest.approx(math.asinh(2 / 3), abs=1e-9)
    assert m.diameter is None


def test_modular_labels_and_angles(modular):
    assert modular.labels == ["S", "T", "T⁻¹"]
    finite = [v for v in modular.vertices if v.is_finite]
    assert len(finite) == 2
    assert all(v.angle == pytest.approx(math.pi / 3, abs=1e-9) for v in finite)
    assert modular.contains(modular.center)


def test_ideal_square_has_no_epsilon(ideal_square):
    with pytest.raises(NoFiniteVertices):
        proximity_epsilon(ideal_square)
    assert domain_metrics(ideal_square).epsilon is None


def test_gamma2_off_axis_center_has_finite_vertices():
    d = build_stable_dirichlet(get_preset("gamma2"), Point.from_half_plane(0.3 + 2j))
    assert len(d.edges) == 6
    assert sum(v.is_finite for v in d.vertices) == 3
    assert not d.is_ideal


def test_gamma2_on_axis_is_ideal(gamma2):
    assert gamma2.is_ideal


@pytest.mark.parametrize("center", [2j, 0.2 + 1.5j, -0.35 + 3j])
def test_domain_is_convex_and_paired(center):
    d = build_stable_dirichlet(get_preset("modular"), Point.from_half_plane(center))
    for e in d.edges:
        for v in d.vertices:
            assert side_of(e.segment.carrier, v.position, tol=1e-7) is not Side.RIGHT
        p = d.edges[e.paired_edge_index]
        assert d.edges[p.paired_edge_index] is e
    # the copies across each edge are disjoint from the domain: their centres lie beyond the edge
    for e in d.edges:
        c = e.label.matrix.lorentz @ d.center.vec
        assert side_of(e.segment.carrier, Point.from_vector(c)) is Side.RIGHT


def test_copies_share_edges(modular):
    def ends(seg):
        return sorted(tuple(np.round(p.vec / p.vec[2], 7)) for p in (seg.e1, seg.e2))

    for e in modular.edges:
        copy = copy_of_domain(modular, e.label)
        assert ends(copy[e.paired_edge_index].segment) == ends(e.segment)


def test_depth_too_small_is_reported():
    from dirichlet_morse.errors import UnstableTruncation

    with pytest.raises(UnstableTruncation):
        build_dirichlet(get_preset("modular"), Point.from_half_plane(2j), 0)


@settings(max_examples=15, deadline=None)
@given(st.floats(-0.45, 0.45), st.floats(1.2, 4.0))
def test_angle_sums_at_finite_vertices(x, y):
    from dirichlet_morse.markov import angle_sum, vertex_star
    from dirichlet_morse.group import GroupElement

    d = build_stable_dirichlet(get_preset("modular"), Point.from_half_plane(complex(x, y)))
    for i, v in enumerate(d.vertices):
        if v.is_finite:
            star = vertex_star(d, GroupElement.identity(), i)
            assert angle_sum(star) == pytest.approx(2 * math.pi, abs=1e-7)
