import pytest

from sector_verifier.errors import BackendMismatch, ConstructionFailed, InvalidPoset
from sector_verifier.geometry import Interval
from sector_verifier.posets import (
    MutuallyDisjointZigZag,
    Splitting,
    ZigZag,
    cap_witness,
    connect,
    is_disjoint,
    is_q_indicator,
    is_q_small,
    validate_mdz,
    validate_splitting,
    validate_zigzag,
)
from sector_verifier.posets.finite import (
    FinitePoset,
    brute_caps,
    brute_q_small,
    brute_reflection_exists,
    brute_small_indicators,
    chain_with_involution,
    discretized_circle,
    load_finite_poset,
    oracle_family,
    parse_finite_poset,
    search_ga3_zigzag,
)
from sector_verifier.zigzag import find_reflection, small_indicator

arc = Interval.from_degrees

SMALL_POSET = """
# two incomparable atoms and their complements
nodes a b a' b'
order a b'
order b a'
involution a a'
involution b b'
"""


def test_predicates_on_intervals(interval_backend):
    p, q = arc(0, 90), arc(180, 270)
    assert is_disjoint(interval_backend, p, q)
    assert cap_witness(interval_backend, p, q) is None
    assert cap_witness(interval_backend, arc(0, 90), arc(45, 135)) == arc(45, 90)
    assert cap_witness(interval_backend, arc(10, 20), arc(0, 90)) == arc(10, 20)


def test_touching_arcs_are_disjoint(interval_backend):
    assert is_disjoint(interval_backend, arc(0, 90), arc(90, 180))
    assert cap_witness(interval_backend, arc(0, 90), arc(90, 180)) is None


def test_q_small_and_indicator(interval_backend):
    q = arc(90, 270)
    r, s = is_q_small(interval_backend, arc(100, 110), q)
    assert interval_backend.leq(arc(100, 110), r) and interval_backend.leq(q, r)
    assert interval_backend.leq(arc(100, 110), s) and interval_backend.leq(interval_backend.involution(q), s)
    assert is_q_indicator(interval_backend, arc(100, 110), arc(0, 180), q)
    assert is_q_indicator(interval_backend, arc(10, 20), arc(0, 180), q)
    assert not is_q_indicator(interval_backend, arc(80, 100), arc(0, 180), q)


def test_mixing_backends_raises(interval_backend, circle4):
    with pytest.raises(BackendMismatch):
        is_disjoint(interval_backend, arc(0, 90), "a0_1")


def test_zigzag_shape():
    zz = ZigZag.from_sequence(["a", "b", "c", "d", "e"])
    assert zz.z == ("a", "c", "e") and zz.y == ("b", "d")
    assert zz.n == 2 and zz.start == "a" and zz.end == "e"
    assert zz.reversed().sequence() == ["e", "d", "c", "b", "a"]
    assert zz.concat(ZigZag.trivial("e")) == zz
    with pytest.raises(ValueError):
        ZigZag.from_sequence(["a", "b"])
    with pytest.raises(ValueError):
        zz.concat(ZigZag.trivial("a"))


def test_validate_zigzag_reports_each_failed_clause(interval_backend):
    good = ZigZag((arc(0, 30), arc(20, 60)), (arc(0, 60),))
    assert validate_zigzag(interval_backend, good, contained_in=arc(0, 90)).ok

    bad = ZigZag((arc(0, 30), arc(50, 100)), (arc(0, 60),))
    report = validate_zigzag(interval_backend, bad, contained_in=arc(0, 90))
    clauses = {(v.clause, tuple(v.indices)) for v in report.violations}
    assert ("next-z-below-y", (1,)) in clauses
    assert ("contained-z", (2,)) in clauses
    assert not report.ok
    assert "next-z-below-y@[1]" in report.summary()


def test_validate_zigzag_shape_violation(interval_backend):
    report = validate_zigzag(interval_backend, ZigZag((arc(0, 30),), (arc(0, 60),)))
    assert [v.clause for v in report.violations] == ["shape"]


def test_validate_mdz_disjointness(interval_backend):
    ok = MutuallyDisjointZigZag.trivial(arc(0, 30), arc(60, 90))
    assert validate_mdz(interval_backend, ok).ok
    overlapping = MutuallyDisjointZigZag.trivial(arc(0, 70), arc(60, 90))
    clauses = {v.clause for v in validate_mdz(interval_backend, overlapping).violations}
    assert clauses == {"start-disjoint", "end-disjoint"}


def test_validate_splitting(interval_backend):
    p = arc(0, 180)
    assert validate_splitting(interval_backend, Splitting(p, arc(0, 60), arc(120, 180))).ok
    report = validate_splitting(interval_backend, Splitting(p, arc(0, 90), arc(60, 200)))
    assert {v.clause for v in report.violations} == {"s-below-parent", "r-disjoint-s"}


def test_connect_on_intervals(interval_backend):
    p, q = arc(0, 90), arc(180, 270)
    zz = connect(interval_backend, p, q)
    assert zz.start == p and zz.end == q
    assert validate_zigzag(interval_backend, zz).ok


def test_connect_complement_goes_through_a_splitting(interval_backend):
    p = arc(0, 90)
    zz = connect(interval_backend, p, interval_backend.involution(p))
    assert zz.n == 2
    assert validate_zigzag(interval_backend, zz).ok


def test_connect_on_finite_circle(circle4):
    zz = connect(circle4, "a0_1", "a2_1")
    assert zz.start == "a0_1" and zz.end == "a2_1"
    assert validate_zigzag(circle4, zz).ok


def test_connect_fails_without_a_splitting():
    chain = chain_with_involution(3)
    with pytest.raises(ConstructionFailed) as info:
        connect(chain, "c0", "c0'")
    assert info.value.trace


def test_parse_finite_poset_round_trip():
    poset = parse_finite_poset(SMALL_POSET)
    assert poset.leq("a", "b'") and poset.leq("b", "a'")
    assert not poset.leq("a", "b")
    again = parse_finite_poset(poset.to_text())
    assert again.nodes == poset.nodes
    assert all(again.leq(x, y) == poset.leq(x, y) for x in poset.nodes for y in poset.nodes)


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "no nodes"),
        ("nodes a a'\ninvolution a a'\nfrobnicate a\n", "unknown keyword"),
        ("nodes a a'\ninvolution a a'\norder a\n", "takes two nodes"),
        ("nodes a b\ninvolution a b\norder a b\norder b a\n", "antisymmetric"),
        ("nodes a a' b\ninvolution a a'\n", "undefined"),
        ("nodes a b c\ninvolution a b\ninvolution a c\n", "two involution images"),
        ("nodes a b a' b'\ninvolution a a'\ninvolution b b'\norder a b\n", "does not reverse"),
        ("nodes a a'\ninvolution a a'\nspread a a\n", "spread map undefined"),
    ],
)
def test_parse_finite_poset_errors(text, message):
    with pytest.raises(InvalidPoset, match=message):
        parse_finite_poset(text)


def test_load_finite_poset_names_the_file(tmp_path):
    path = tmp_path / "atoms.poset"
    path.write_text(SMALL_POSET)
    poset = load_finite_poset(path)
    assert isinstance(poset, FinitePoset)
    assert poset.name == "finite:atoms.poset"


def test_discretized_circle_is_complement_on_arcs():
    circle = discretized_circle(5)
    assert len(circle.nodes) == 20
    assert circle.involution("a0_2") == "a2_3"
    assert circle.leq("a1_1", "a0_2")
    assert circle.enlarge("a0_1", 0) == "a0_1"
    with pytest.raises(InvalidPoset):
        circle.enlarge("a0_1")


# The generic constructions must agree with brute-force enumeration.


@pytest.fixture(scope="module")
def family():
    return oracle_family(seed=7, random_count=8)


def test_caps_and_smallness_match_enumeration(family):
    for poset in family:
        for p in poset.nodes:
            for q in poset.nodes:
                assert (cap_witness(poset, p, q) is None) == (not brute_caps(poset, p, q)), (poset.name, p, q)
                assert (is_q_small(poset, p, q) is not None) == brute_q_small(poset, p, q), (poset.name, p, q)


def test_small_indicator_exists_exactly_when_enumeration_finds_one(family):
    for poset in family:
        for p in poset.nodes:
            for q in poset.nodes:
                expected = brute_small_indicators(poset, p, q)
                if expected:
                    found = small_indicator(poset, p, q)
                    assert found in expected, (poset.name, p, q)
                else:
                    with pytest.raises(ConstructionFailed):
                        small_indicator(poset, p, q)


def test_searched_ga3_zigzags_validate(family):
    for poset in family:
        for p in poset.nodes:
            for q in poset.nodes:
                ends = brute_small_indicators(poset, p, q)
                for pt in ends[:2]:
                    for ph in ends[-2:]:
                        zz = search_ga3_zigzag(poset, pt, ph, p, q)
                        if zz is not None:
                            assert validate_zigzag(poset, zz, contained_in=p, ga3_for=q).ok


def test_reflection_found_exactly_when_one_exists(family):
    for poset in family:
        for p in poset.nodes:
            if brute_reflection_exists(poset, p):
                find_reflection(poset, p)
            else:
                with pytest.raises(ConstructionFailed):
                    find_reflection(poset, p)


def test_splittings_validate(family):
    for poset in family:
        for p in poset.nodes:
            parts = poset.split(p)
            if parts is not None:
                assert validate_splitting(poset, Splitting(p, *parts)).ok
