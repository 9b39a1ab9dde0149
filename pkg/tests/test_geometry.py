import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sector_verifier.errors import ConfigError, DegenerateGeometry, RegionSyntaxError
from sector_verifier.geometry import (
    Cap,
    Cone,
    ConeBackend,
    Interval,
    IntervalBackend,
    Tolerance,
    format_region,
    make_backend,
    parse_region,
    swap_configuration,
    zoom_out_radius,
)
from sector_verifier.geometry.cap import CapBackend
from sector_verifier.geometry.tolerance import degrees, format_degrees
from sector_verifier.posets import Splitting, cap_witness, is_disjoint, validate_reflection, validate_splitting
from sector_verifier.posets.finite import FinitePoset
from sector_verifier.zigzag import find_reflection, swap_mdz
from tests.conftest import intervals

arc = Interval.from_degrees
BACKEND = IntervalBackend()


# intervals ----------------------------------------------------------------------


def test_interval_normalizes_and_rejects_full_turns():
    iv = arc(350, 370)
    assert iv.start == Fraction(35, 18) and iv.end == Fraction(1, 18)
    assert iv.length == Fraction(1, 9)
    assert iv.mid == 0
    with pytest.raises(DegenerateGeometry):
        arc(0, 360)


def test_interval_sub_and_containment():
    iv = arc(300, 60)
    assert iv.sub(Fraction(1, 6), Fraction(1, 3)) == arc(330, 0)
    assert iv.contains_angle(degrees(10))
    assert not iv.contains_angle(degrees(60))
    assert not iv.contains_angle(degrees(90))


def test_interval_order():
    assert BACKEND.leq(arc(10, 20), arc(0, 90))
    assert BACKEND.leq(arc(350, 10), arc(300, 30))
    assert not BACKEND.leq(arc(0, 90), arc(10, 20))
    assert BACKEND.involution(arc(0, 90)) == arc(90, 0)
    assert BACKEND.split(arc(0, 90)) == (arc(0, 30), arc(60, 90))


def test_interval_check_rejects_slivers():
    with pytest.raises(DegenerateGeometry):
        BACKEND.check(Interval(Fraction(0), Fraction(1, 10**12)))


@given(intervals())
def test_involution_is_involutive(p):
    assert BACKEND.involution(BACKEND.involution(p)) == p
    assert BACKEND.leq(p, p)


@given(intervals(), intervals())
def test_involution_reverses_order(p, q):
    if BACKEND.leq(p, q):
        assert BACKEND.leq(BACKEND.involution(q), BACKEND.involution(p))


@given(intervals(), intervals())
def test_cap_exists_unless_disjoint(p, q):
    assert (cap_witness(BACKEND, p, q) is None) == is_disjoint(BACKEND, p, q)


@given(intervals(max_length=358))
def test_interval_splittings_are_valid(p):
    assert validate_splitting(BACKEND, Splitting(p, *BACKEND.split(p))).ok


def test_degree_conversions():
    assert degrees(90) == Fraction(1, 2)
    assert degrees("45/2") == Fraction(1, 8)
    assert degrees(90.0) == 0.5
    assert format_degrees(Fraction(1, 8)) == "45/2"
    assert format_degrees(Fraction(1, 2)) == "90"


def test_strict_tolerance_needs_no_eps():
    strict = Tolerance(eps=0.0, mode="strict-rational")
    assert strict.angle_eps == 0.0
    with pytest.raises(ValueError):
        Tolerance(eps=0.0)


# cones -----------------------------------------------------------------------------


def test_cone_order_follows_apex_and_directions(cone_backend):
    quadrant = Cone.from_degrees(0, 0, 0, 90)
    shifted = Cone.from_degrees(-1, -1, 0, 90)
    assert cone_backend.leq(quadrant, shifted)
    assert not cone_backend.leq(shifted, quadrant)
    assert cone_backend.leq(Cone.from_degrees(1, 1, 10, 80), quadrant)


def test_cone_disjointness(cone_backend):
    quadrant = Cone.from_degrees(0, 0, 0, 90)
    assert is_disjoint(cone_backend, quadrant, Cone.from_degrees(0, 0, 180, 270))
    assert not is_disjoint(cone_backend, quadrant, Cone.from_degrees(10, 0, 90, 180))


def test_wide_cone_order(cone_backend):
    wide = Cone.from_degrees(0, 0, 0, 270)
    assert cone_backend.leq(Cone.from_degrees(1, 1, 45, 90), wide)
    assert not cone_backend.leq(Cone.from_degrees(1, -1, 300, 330), wide)


def test_enlarge_shifts_the_apex_outward(cone_backend):
    quadrant = Cone.from_degrees(0, 0, 0, 90)
    bigger = cone_backend.enlarge(quadrant, 1)
    assert bigger.apex == (-1, -1)
    assert bigger.dir == quadrant.dir
    assert cone_backend.leq(quadrant, bigger)
    assert cone_backend.enlarge(quadrant, 0) is quadrant


def test_enlarging_the_complement_undoes_enlargement(cone_backend):
    quadrant = Cone.from_degrees(0, 0, 0, 90)
    bigger = cone_backend.enlarge(quadrant, 1)
    back = cone_backend.enlarge(cone_backend.involution(bigger), 1)
    assert cone_backend.equal(back, cone_backend.involution(quadrant))


@given(
    st.integers(min_value=0, max_value=359),
    st.integers(min_value=10, max_value=170),
    st.integers(min_value=1, max_value=40),
)
def test_spread_identity(start, opening, eighths):
    cones = ConeBackend()
    p = Cone((0, 0), arc(start, start + opening))
    s = Fraction(eighths, 8)
    bigger = cones.enlarge(p, s)
    assert cones.leq(p, bigger)
    assert cones.equal(cones.enlarge(cones.involution(bigger), s), cones.involution(p))


def test_enlarge_rejects_degenerate_cones(cone_backend):
    with pytest.raises(DegenerateGeometry):
        cone_backend.enlarge(Cone((0, 0), Interval(Fraction(0), Fraction(1, 10**12))), 1)


def test_cone_cap_lies_below_both(cone_backend):
    p = Cone.from_degrees(0, 0, 0, 120)
    q = Cone.from_degrees(3, -2, 60, 200)
    r = cap_witness(cone_backend, p, q)
    assert r is not None
    assert cone_backend.leq(r, p) and cone_backend.leq(r, q)


def test_zoom_out_radius_bounds_the_deviation():
    far = zoom_out_radius(2.0, Fraction(1, 36))
    assert far == pytest.approx(2.0 / math.sin(math.pi / 36))


# caps ------------------------------------------------------------------------------


def test_cap_involution_and_order(cap_backend):
    north = Cap.at((0, 0, 2), math.pi / 2)
    south = cap_backend.involution(north)
    assert south.center == (-0.0, -0.0, -1.0)
    assert is_disjoint(cap_backend, north, south)
    assert not is_disjoint(cap_backend, north, north)
    assert cap_backend.leq(Cap.at((0, 0, 1), 0.1), north)
    assert not cap_backend.leq(north, Cap.at((0, 0, 1), 0.1))


def test_cap_rejects_zero_center():
    with pytest.raises(DegenerateGeometry):
        Cap.at((0, 0, 0), 1.0)


def test_cap_split_and_cap_candidate(cap_backend):
    p = Cap.from_spherical(0.4, 1.0, 0.8)
    assert validate_splitting(cap_backend, Splitting(p, *cap_backend.split(p))).ok
    q = Cap.from_spherical(0.9, 1.2, 0.7)
    r = cap_witness(cap_backend, p, q)
    assert r is not None and cap_backend.leq(r, p) and cap_backend.leq(r, q)


def test_swap_configuration_exchanges_two_caps(cap_backend):
    p, rs, ss = swap_configuration()
    m = swap_mdz(cap_backend, p, rs, ss)
    assert m.start == (rs[0], rs[1])
    assert m.end == (rs[1], rs[0])
    assert m.n == 2
    assert list(m.top.sequence()) == [rs[0], ss[1], rs[2], ss[0], rs[1]]
    assert list(m.bottom.sequence()) == [rs[1], ss[2], rs[0], rs[0], rs[0]]


def _sphere_points(count: int, seed: int) -> list[np.ndarray]:
    v = np.random.default_rng(seed).normal(size=(count, 3))
    return list(v / np.linalg.norm(v, axis=1, keepdims=True))


def test_cap_order_agrees_with_sampled_points(cap_backend):
    rng = random.Random(5)
    points = _sphere_points(10_000, seed=5)
    for _ in range(3):
        q = cap_backend.random_element(rng)
        below, apart = cap_backend.random_below(q, rng), cap_backend.random_below(cap_backend.involution(q), rng)
        assert cap_backend.leq(below, q)
        assert is_disjoint(cap_backend, apart, q)
        inside_q = [cap_backend.contains_point(q, x) for x in points]
        for p in (below, apart, cap_backend.random_element(rng)):
            inside_p = [cap_backend.contains_point(p, x) for x in points]
            if cap_backend.leq(p, q):
                assert not any(a and not b for a, b in zip(inside_p, inside_q))
            if is_disjoint(cap_backend, p, q):
                assert not any(a and b for a, b in zip(inside_p, inside_q))


@given(
    st.floats(min_value=0.0, max_value=math.pi),
    st.floats(min_value=0.0, max_value=2 * math.pi),
    st.floats(min_value=0.05, max_value=math.pi - 0.05),
)
def test_every_cap_has_a_reflection(colatitude, longitude, radius):
    caps = CapBackend()
    p = Cap.from_spherical(colatitude, longitude, radius)
    refl = caps.reflection(p)
    assert validate_reflection(caps, refl).ok
    assert find_reflection(caps, p) == refl


# text form -------------------------------------------------------------------------


@pytest.mark.parametrize("spec, kind", [("interval", IntervalBackend), ("cone", ConeBackend), ("cap", CapBackend)])
def test_make_backend(spec, kind):
    assert isinstance(make_backend(spec), kind)


def test_make_backend_rejects_unknown_names():
    with pytest.raises(ConfigError):
        make_backend("torus")


def test_make_backend_loads_finite_posets(tmp_path):
    path = tmp_path / "pair.poset"
    path.write_text("nodes a a'\ninvolution a a'\n")
    poset = make_backend(f"finite:{path}")
    assert isinstance(poset, FinitePoset)
    assert parse_region("node(a)", poset) == "a"
    assert format_region(poset, "a") == "node(a)"
    with pytest.raises(ValueError):
        parse_region("node(b)", poset)


@pytest.mark.parametrize(
    "backend, text",
    [
        (IntervalBackend(), "interval(45/2,90)"),
        (ConeBackend(), "cone(1,-1/2,0,90)"),
    ],
)
def test_region_text_round_trip(backend, text):
    region = parse_region(text, backend)
    assert format_region(backend, region) == text


def test_cap_text_round_trip(cap_backend):
    cap = parse_region("cap(0,0,1,60)", cap_backend)
    assert cap.radius == pytest.approx(math.pi / 3)
    assert cap_backend.equal(parse_region(format_region(cap_backend, cap), cap_backend), cap)


@pytest.mark.parametrize(
    "text, error",
    [
        ("interval(0,90", RegionSyntaxError),
        ("cone(0,0,0,90)", RegionSyntaxError),
        ("interval(a,90)", RegionSyntaxError),
        ("interval(0,1/0)", RegionSyntaxError),
        ("interval(10,10)", DegenerateGeometry),
    ],
)
def test_parse_region_errors(text, error):
    with pytest.raises(error):
        parse_region(text, IntervalBackend())
