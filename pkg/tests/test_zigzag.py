from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sector_verifier.errors import PreconditionViolated
from sector_verifier.geometry import Cone, ConeBackend, Interval, zoom_out_radius
from sector_verifier.posets import Splitting, ZigZag, validate_mdz, validate_reflection, validate_zigzag
from sector_verifier.posets.finite import discretized_circle
from sector_verifier.zigzag import (
    PATTERNS,
    concat,
    find_reflection,
    ga3_zigzag,
    is_small_indicator,
    mdz_between_splittings,
    orient_start,
    reverse,
    shrink_against,
    slice_mdz,
    small_indicator,
    swap_rows,
    triangle_dance,
    trivial,
    true_reverse,
    zz_avoid_third,
    zz_concat_split,
    zz_shorten,
)

arc = Interval.from_degrees
P = arc(0, 180)

# (0,30) ≤ (0,60) ≥ (40,60) ≤ (40,130) ≥ (100,130)
SAMPLE = ZigZag((arc(0, 30), arc(40, 60), arc(100, 130)), (arc(0, 60), arc(40, 130)))


@pytest.fixture(scope="module")
def circle6():
    return discretized_circle(6)


# small indicators and GA3 zig-zags -----------------------------------------------


def test_small_indicator_on_intervals(interval_backend):
    q = arc(90, 270)
    found = small_indicator(interval_backend, P, q)
    assert found == arc(90, 120)
    assert is_small_indicator(interval_backend, found, P, q)


def test_ga3_zigzag_between_separated_indicators(interval_backend):
    pt, ph, q = arc(10, 20), arc(150, 170), arc(45, 135)
    zz = ga3_zigzag(interval_backend, pt, ph, P, q)
    assert zz.start == pt and zz.end == ph
    assert zz.n == 5
    assert validate_zigzag(interval_backend, zz, contained_in=P, ga3_for=q).ok


def test_ga3_zigzag_through_a_common_piece(interval_backend):
    zz = ga3_zigzag(interval_backend, arc(10, 30), arc(20, 40), P, arc(90, 270))
    assert zz.n == 2
    assert arc(20, 30) in zz.sequence()


def test_ga3_zigzag_requires_indicators(interval_backend):
    with pytest.raises(PreconditionViolated):
        ga3_zigzag(interval_backend, arc(80, 100), arc(10, 20), P, arc(90, 270))


# zig-zag facts ---------------------------------------------------------------------


def test_sample_zigzag_is_valid(interval_backend):
    assert validate_zigzag(interval_backend, SAMPLE).ok


def test_zz_shorten_cuts_at_first_meeting_link(interval_backend):
    short, b_hat = zz_shorten(interval_backend, SAMPLE, arc(50, 70))
    assert b_hat == arc(50, 60)
    assert short == ZigZag((arc(0, 30), arc(50, 60)), (arc(0, 60),))
    with pytest.raises(PreconditionViolated):
        zz_shorten(interval_backend, SAMPLE, arc(200, 220))


def test_zz_concat_split_rejoins(interval_backend):
    head, tail, c_tilde = zz_concat_split(interval_backend, SAMPLE, arc(110, 150))
    assert c_tilde == arc(110, 130)
    assert head.end == c_tilde == tail.start
    assert head.start == SAMPLE.start and tail.end == SAMPLE.end
    assert validate_zigzag(interval_backend, head.concat(tail)).ok


def test_shrink_against_keeps_disjoint_elements(interval_backend):
    c = arc(200, 300)
    assert shrink_against(interval_backend, c, [arc(0, 60), arc(100, 150)]) == c
    with pytest.raises(PreconditionViolated):
        shrink_against(interval_backend, c, [arc(0, 60), arc(150, 210)])


def test_zz_avoid_third(interval_backend):
    c_tilde, report = zz_avoid_third(interval_backend, SAMPLE, arc(200, 300))
    assert report.ok
    assert interval_backend.leq(c_tilde, arc(200, 300))


# mutually disjoint zig-zags ----------------------------------------------------------


@pytest.fixture
def splitting_mdz(interval_backend):
    s1 = Splitting(P, arc(0, 60), arc(90, 180))
    s2 = Splitting(P, arc(30, 80), arc(100, 170))
    swapped, m = mdz_between_splittings(interval_backend, P, s1, s2)
    assert not swapped
    return m


def test_mdz_between_splittings(interval_backend, splitting_mdz):
    m = splitting_mdz
    assert m.start == (arc(0, 60), arc(90, 180))
    assert m.end == (arc(30, 80), arc(100, 170))
    assert m.n == 2
    assert validate_mdz(interval_backend, m, contained_in=P).ok


def test_mdz_between_reversed_splittings(interval_backend):
    s1 = Splitting(P, arc(0, 60), arc(90, 180))
    s2 = Splitting(P, arc(100, 170), arc(30, 80))
    swapped, m = mdz_between_splittings(interval_backend, P, s1, s2)
    assert swapped
    assert m.end == (arc(30, 80), arc(100, 170))


def test_mdz_between_identical_splittings(interval_backend):
    s = Splitting(P, arc(0, 60), arc(90, 180))
    assert mdz_between_splittings(interval_backend, P, s, s) == (False, trivial(s.r, s.s))
    flipped = Splitting(P, s.s, s.r)
    assert mdz_between_splittings(interval_backend, P, s, flipped) == (True, trivial(s.r, s.s))


def test_mdz_between_splittings_checks_inputs(interval_backend):
    s = Splitting(P, arc(0, 60), arc(90, 180))
    with pytest.raises(PreconditionViolated):
        mdz_between_splittings(interval_backend, P, s, Splitting(P, arc(0, 90), arc(60, 180)))
    with pytest.raises(PreconditionViolated):
        mdz_between_splittings(interval_backend, P, s, Splitting(arc(0, 170), arc(0, 60), arc(90, 170)))


def test_mdz_transforms_stay_valid(interval_backend, splitting_mdz):
    m = splitting_mdz
    back = reverse(m)
    assert back.start == (m.end[1], m.end[0])
    swapped = swap_rows(m)
    assert swapped.start == (m.start[1], m.start[0])
    undone = true_reverse(m)
    assert undone.start == m.end and undone.end == m.start
    for variant in (back, swapped, undone):
        assert validate_mdz(interval_backend, variant, contained_in=P).ok


def test_mdz_slicing_and_concatenation(splitting_mdz):
    m = splitting_mdz
    assert slice_mdz(m, 0, m.n) == m
    assert slice_mdz(m, 1, 1).n == 0
    with pytest.raises(ValueError):
        slice_mdz(m, 2, 1)
    with pytest.raises(ValueError):
        slice_mdz(m, 0, m.n + 1)
    assert concat(m, trivial(*m.end)) == m
    with pytest.raises(ValueError):
        concat(m, trivial(*m.start))


def test_orient_start(splitting_mdz):
    m = splitting_mdz
    assert orient_start(m, m.start) == m
    assert orient_start(m, (m.start[1], m.start[0])) == swap_rows(m)
    with pytest.raises(ValueError):
        orient_start(m, (arc(200, 210), arc(220, 230)))


def test_mdz_between_splittings_on_a_finite_circle(circle6):
    p = "a0_5"
    s1 = Splitting(p, "a0_1", "a2_1")
    s2 = Splitting(p, "a3_1", "a1_1")
    _, m = mdz_between_splittings(circle6, p, s1, s2)
    assert m.start == ("a0_1", "a2_1")
    assert set(m.end) == {"a3_1", "a1_1"}
    assert validate_mdz(circle6, m, contained_in=p).ok


# triangle dances -------------------------------------------------------------------


def test_triangle_dance_on_a_finite_circle(circle6):
    p = "a0_5"
    labels = {"a": "a0_1", "b": "a2_1", "c": "a4_1"}
    dance = triangle_dance(circle6, labels["a"], labels["b"], labels["c"], p)
    assert dance.pattern in PATTERNS
    assert dance.states == tuple((labels[x], labels[z]) for x, z in PATTERNS[dance.pattern])
    for leg in dance.legs:
        assert validate_mdz(circle6, leg, contained_in=p).ok


def test_triangle_dance_needs_disjoint_elements(interval_backend):
    with pytest.raises(PreconditionViolated):
        triangle_dance(interval_backend, arc(0, 40), arc(30, 60), arc(100, 120), P)


# reflections -----------------------------------------------------------------------


def test_find_reflection_on_intervals(interval_backend):
    refl = find_reflection(interval_backend, P)
    assert refl.base.parent == P
    assert validate_reflection(interval_backend, refl).ok


# cones -----------------------------------------------------------------------------

HALF_PLANE = Cone.from_degrees(0, 0, 0, 180)


def test_cone_ga3_zigzag_lifts_the_directions(cone_backend):
    q = Cone.from_degrees(0, 0, 45, 135)
    pt, ph = Cone.from_degrees(0, 0, 10, 20), Cone.from_degrees(0, 0, 150, 170)
    zz = ga3_zigzag(cone_backend, pt, ph, HALF_PLANE, q)
    assert zz.start == pt and zz.end == ph
    assert zz.n > 2
    assert all(y.apex != (0, 0) for y in zz.y[1:-1])
    assert validate_zigzag(cone_backend, zz, contained_in=HALF_PLANE, ga3_for=q).ok


def test_radial_directions_settle_beyond_the_zoom_out_radius(cone_backend):
    cone = Cone.from_degrees(3, 4, 30, 120)
    eps = Fraction(1, 180)
    far = zoom_out_radius(6, eps, [cone])
    radial = cone_backend.radial_interval(cone, 2 * far)
    assert abs(radial.start - cone.dir.start) < eps
    assert abs(radial.end - cone.dir.end) < eps
    with pytest.raises(PreconditionViolated):
        cone_backend.radial_interval(cone, 4)


def test_mdz_between_quadrants_and_thirds_of_a_half_plane(cone_backend):
    quadrants = Splitting(HALF_PLANE, Cone.from_degrees(0, 0, 0, 90), Cone.from_degrees(0, 0, 90, 180))
    thirds = Splitting(HALF_PLANE, *cone_backend.split(HALF_PLANE))
    swapped, m = mdz_between_splittings(cone_backend, HALF_PLANE, quadrants, thirds)
    assert not swapped
    assert m.start == (quadrants.r, quadrants.s)
    assert m.end == (thirds.r, thirds.s)
    assert validate_mdz(cone_backend, m, contained_in=HALF_PLANE).ok

    swapped, m = mdz_between_splittings(cone_backend, HALF_PLANE, quadrants, Splitting(HALF_PLANE, thirds.s, thirds.r))
    assert swapped
    assert m.end == (thirds.r, thirds.s)


def test_find_reflection_on_a_quadrant(cone_backend):
    quadrant = Cone.from_degrees(0, 0, 0, 90)
    refl = find_reflection(cone_backend, quadrant)
    assert refl == cone_backend.reflection(quadrant)
    assert refl.c == Cone.from_degrees(0, 0, 45, 225)
    assert validate_reflection(cone_backend, refl).ok


@given(
    st.integers(min_value=0, max_value=359),
    st.integers(min_value=10, max_value=350),
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=-5, max_value=5),
)
def test_every_cone_has_a_reflection(start, opening, x, y):
    cones = ConeBackend()
    p = Cone.from_degrees(x, y, start, start + opening)
    assert validate_reflection(cones, cones.reflection(p)).ok
