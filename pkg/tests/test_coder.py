import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dirichlet_morse import DirectedGeodesic, Point, TraceConfig, locate, sample_generic, trace
from dirichlet_morse.coder import contains_factor, has_inverse_pair
from dirichlet_morse.errors import DegenerateInput, NonGeneric, OnBoundary, SamplingExhausted
from dirichlet_morse.geometry import TWO_PI, apply_geodesic, geodesic_normal_at, point_along

angles = st.floats(0.0, TWO_PI, exclude_max=True)


def test_axis_of_translation_reads_one_letter(ideal_square):
    cs = trace(ideal_square, DirectedGeodesic.from_angles(math.pi, 0.0), TraceConfig(max_steps=10))
    assert list(cs.word) == ["A"] * 20
    assert cs.complete == (False, False)


def test_reversed_axis_reads_the_inverse(ideal_square):
    cs = trace(ideal_square, DirectedGeodesic.from_angles(0.0, math.pi), TraceConfig(max_steps=5))
    assert set(cs.word) == {"A⁻¹"}


def test_modular_trace_is_frozen(modular):
    cs = trace(modular, DirectedGeodesic.from_angles(0.3, 2.5), TraceConfig(max_steps=5))
    assert list(cs.word) == ["T", "T", "T", "T", "T", "T", "S", "T", "T", "T"]


def test_vertex_hitting_geodesic_is_non_generic(modular):
    v = modular.vertices[0]
    gamma = DirectedGeodesic.from_normal(geodesic_normal_at(v.vec, 0.3))
    with pytest.raises(NonGeneric) as info:
        trace(modular, gamma, TraceConfig(max_steps=5))
    assert info.value.position is not None
    assert Point.from_vector(info.value.position).z == pytest.approx(v.position.z, abs=1e-9)


def test_geodesic_along_an_edge_has_no_basepoint(modular):
    # the finite edge lies on the diameter through both order-3 points
    with pytest.raises(OnBoundary):
        trace(modular, DirectedGeodesic.from_angles(math.pi / 2, 3 * math.pi / 2))


def test_basepoint_must_lie_on_the_geodesic(ideal_square):
    gamma = DirectedGeodesic.from_angles(math.pi, 0.0)
    with pytest.raises(DegenerateInput):
        trace(ideal_square, gamma, TraceConfig(basepoint=Point.from_complex(0.3j)))
    cs = trace(ideal_square, gamma, TraceConfig(max_steps=3, basepoint=Point.from_complex(0.1 + 0j)))
    assert set(cs.word) == {"A"}


def test_locate_finds_the_copy(modular):
    g = modular.alphabet.evaluate(("T", "S", "T"))
    p = Point.from_vector(g.lorentz @ point_along(modular.center.vec, 0.4, 0.2))
    found = locate(modular, p.vec)
    assert found.matrix.close_to(g, 1e-7)


def test_sampling_is_deterministic(modular):
    a = sample_generic(modular, 20, 10, seed=5)
    b = sample_generic(modular, 20, 10, seed=5)
    c = sample_generic(modular, 20, 10, seed=6)
    assert [x.word for x in a] == [x.word for x in b]
    assert [x.word for x in a] != [x.word for x in c]
    assert all(len(x.word) == 20 for x in a)


def test_huge_margin_exhausts_sampling(modular):
    with pytest.raises(SamplingExhausted):
        sample_generic(modular, 5, 20, seed=0, margin=2.0)


def test_factor_helpers():
    assert contains_factor(("a", "b", "c"), ("b", "c"))
    assert not contains_factor(("a", "b", "c"), ("c", "b"))
    assert has_inverse_pair(("S", "S"), lambda x: x)


@settings(max_examples=40, deadline=None)
@given(angles, angles)
def test_reversal_reads_inverse_word_backwards(a, b):
    d = _cached("modular")
    assume(min(abs(a - b), TWO_PI - abs(a - b)) > 0.05)
    gamma = DirectedGeodesic.from_angles(a, b)
    try:
        fw = trace(d, gamma, TraceConfig(max_steps=6))
        bw = trace(d, gamma.reversed(), TraceConfig(max_steps=6))
    except (NonGeneric, OnBoundary):
        assume(False)
    inv = tuple(d.inverse_label(x) for x in reversed(fw.word))
    # the two windows are centred at different crossings; compare a common stretch
    assert contains_factor(inv, bw.word[3:-3]) or contains_factor(bw.word, inv[3:-3])


@settings(max_examples=40, deadline=None)
@given(angles, angles, st.sampled_from(["modular", "ideal-square"]))
def test_codes_obey_the_no_inverse_rule(a, b, preset):
    d = _cached(preset)
    assume(min(abs(a - b), TWO_PI - abs(a - b)) > 1e-3)
    try:
        cs = trace(d, DirectedGeodesic.from_angles(a, b), TraceConfig(max_steps=15))
    except (NonGeneric, OnBoundary):
        assume(False)
    assert not has_inverse_pair(cs.word, d.inverse_label)


@settings(max_examples=30, deadline=None)
@given(angles, angles, st.lists(st.sampled_from(["S", "T", "T⁻¹"]), max_size=5))
def test_codes_are_invariant_under_the_group(a, b, word):
    d = _cached("modular")
    assume(min(abs(a - b), TWO_PI - abs(a - b)) > 0.05)
    gamma = DirectedGeodesic.from_angles(a, b)
    g = d.alphabet.evaluate(word)
    moved = apply_geodesic(g, gamma)
    assume(min(abs(moved.source.theta - moved.target.theta),
               TWO_PI - abs(moved.source.theta - moved.target.theta)) > 0.05)
    try:
        w1 = trace(d, gamma, TraceConfig(max_steps=12)).word
        w2 = trace(d, moved, TraceConfig(max_steps=12)).word
    except (NonGeneric, OnBoundary):
        assume(False)
    # same geodesic on the quotient: long common stretches
    assert contains_factor(w1, w2[8:-8]) or contains_factor(w2, w1[8:-8])


_DOMAINS = {}


def _cached(name):
    from dirichlet_morse import build_stable_dirichlet, get_preset

    if name not in _DOMAINS:
        center = {"modular": 2j, "ideal-square": 1j}[name]
        _DOMAINS[name] = build_stable_dirichlet(get_preset(name), Point.from_half_plane(center))
    return _DOMAINS[name]
