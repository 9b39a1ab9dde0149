import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sector_verifier.calculus import (
    AlgSym,
    App,
    Gen,
    NetSpec,
    Override,
    RegionRef,
    Script,
    ScriptBuilder,
    ScriptStep,
    SectorSym,
    Star,
    Term,
    Uni,
    UnitarySym,
    apply_rule,
    braiding_term,
    check_equal,
    format_script,
    format_term,
    fusion_term,
    ill_formed,
    leq,
    load_net,
    mutate,
    parse_script,
    parse_term,
    region_of,
    rewrite_rules,
    run_script,
    save_net,
)
from sector_verifier.calculus.scripts import REJECTIONS
from sector_verifier.errors import ConstructionFailed, MalformedScript, PreconditionViolated, RewriteError
from sector_verifier.geometry import Interval, IntervalBackend
from sector_verifier.posets import is_disjoint
from sector_verifier.posets.finite import brute_reflection_exists, parse_finite_poset

arc = Interval.from_degrees


def toy_net() -> NetSpec:
    regions = {
        "l": arc(0, 30),
        "m": arc(90, 120),
        "a": arc(200, 230),
        "b": arc(300, 330),
        "bb": arc(210, 240),
        "c": arc(240, 260),
        "t": arc(205, 210),
        "q": arc(180, 270),
    }
    return NetSpec(
        "toy",
        IntervalBackend(),
        regions,
        sectors=[SectorSym("pi", "l"), SectorSym("sigma", "m")],
        unitaries=[UnitarySym("u", "pi", "sigma")],
        generators=[AlgSym("x", RegionRef("a")), AlgSym("y", RegionRef("b")), AlgSym("z", RegionRef("bb"))],
    )


@pytest.fixture
def net():
    return toy_net()


def script(text: str) -> Script:
    return parse_script(text.strip() + "\n")


# terms -------------------------------------------------------------------------------


def test_region_refs():
    ref = RegionRef.parse("q'+2")
    assert ref == RegionRef("q", True, 2)
    assert str(ref) == "q'+2"
    assert RegionRef("q").flipped() == RegionRef("q", True)
    assert RegionRef("q").enlarged().enlarged() == RegionRef("q", False, 2)
    with pytest.raises(RewriteError):
        ref.flipped()
    with pytest.raises(MalformedScript):
        RegionRef.parse("1q")


@pytest.mark.parametrize(
    "text",
    [
        "(one)",
        "(gen x)",
        "(star (uni u))",
        "(mul (uni u) (app pi q'+1 (mul (gen x) (star (gen y)))) (star (uni u)))",
        "(app pi q (one))",
    ],
)
def test_term_text_round_trip(text):
    assert format_term(parse_term(text)) == text


def test_nested_products_flatten():
    assert parse_term("(mul (gen x) (mul (gen y) (gen z)))") == Term.of(Gen("x"), Gen("y"), Gen("z"))


@pytest.mark.parametrize(
    "text",
    ["(gen)", "(gen x", "(gen x) (gen y)", "(frob x)", "(star (star (gen x)))", "(app pi 1q (gen x))"],
)
def test_parse_term_errors(text):
    with pytest.raises(MalformedScript):
        parse_term(text)


def test_term_adjoint_reverses_and_stars():
    t = Term.of(Uni("u"), App("pi", RegionRef("q"), Term.of(Gen("x"))), Gen("y"))
    assert t.star() == Term.of(Star(Gen("y")), App("pi", RegionRef("q"), Term.of(Star(Gen("x")))), Star(Uni("u")))
    assert t.star().star() == t


# nets --------------------------------------------------------------------------------


def test_net_resolves_references(net):
    assert net.resolve(RegionRef("l", True)) == arc(30, 0)
    assert net.resolve(RegionRef("a")) == arc(200, 230)
    with pytest.raises(PreconditionViolated):
        net.resolve(RegionRef("nowhere"))


def test_net_rejects_bad_declarations():
    backend = IntervalBackend()
    with pytest.raises(ValueError):
        NetSpec("n", backend, {"l": arc(0, 30)}, sectors=[SectorSym("pi", "l"), SectorSym("pi", "l")])
    with pytest.raises(PreconditionViolated):
        NetSpec("n", backend, {"l": arc(0, 30)}, sectors=[SectorSym("pi", "k")])
    with pytest.raises(PreconditionViolated):
        NetSpec(
            "n", backend, {"l": arc(0, 30)}, sectors=[SectorSym("pi", "l")], unitaries=[UnitarySym("u", "pi", "rho")]
        )
    with pytest.raises(PreconditionViolated):
        NetSpec("n", backend, {"l": arc(0, 30)}, spread=-1)


def test_net_round_trips_through_json(net, tmp_path):
    path = tmp_path / "toy.json"
    save_net(net, path)
    again = load_net(path)
    assert again.to_file() == net.to_file()
    assert again.regions == net.regions


def test_unitary_region_contains_both_localizations(net):
    region = net.unitary_region("u")
    assert net.holds(leq(RegionRef("l"), region)) and net.holds(leq(RegionRef("m"), region))


# membership --------------------------------------------------------------------------


def test_region_of_a_generator(net):
    assert region_of(net, parse_term("(gen x)")) == RegionRef("a")


def test_ill_formed_names_the_failing_fact(net):
    assert ill_formed(net, parse_term("(app pi q (gen x))")) is None
    bad = ill_formed(net, parse_term("(app pi l (gen x))"))
    assert str(bad) == "leq(a, l)"


# rules -------------------------------------------------------------------------------


def test_apply_rule_returns_facts(net):
    rewrite = apply_rule(net, parse_term("(app pi q (gen x))"), "loc", (0,), {"via": "a"})
    assert rewrite.term == parse_term("(gen x)")
    assert {str(f) for f in rewrite.facts} == {"leq(a, a)", "leq(a, q)", "leq(a, l')"}


def test_apply_rule_rejects_mismatches(net):
    with pytest.raises(RewriteError):
        apply_rule(net, parse_term("(gen x)"), "loc", (0,), {"via": "a"})
    with pytest.raises(MalformedScript):
        apply_rule(net, parse_term("(gen x)"), "frob", (0,), {})


# scripts -----------------------------------------------------------------------------

LOC = """
script drop-pi
net toy
from (app pi q (gen x))
to (gen x)
apply loc at 0 with via=a
end
"""

COMM_OK = """
script swap-xy
net toy
from (mul (gen x) (gen y))
to (mul (gen y) (gen x))
apply comm at 0 with left=a, right=b
end
"""

COMM_BAD = """
script swap-xz
net toy
from (mul (gen x) (gen z))
to (mul (gen z) (gen x))
apply comm at 0 with left=a, right=bb
end
"""


def test_script_text_round_trip():
    text = (
        "script swap-xy\n"
        "net toy\n"
        "from (mul (gen x) (gen y))\n"
        "to (mul (gen y) (gen x))\n"
        "override a = ~q\n"
        "apply comm at 0 with left=a, right=b ; requires disjoint(a, b), !leq(a, b)\n"
        "end\n"
    )
    parsed = parse_script(text)
    assert parsed.overrides[0].inverted
    assert [str(f) for f in parsed.steps[0].requires] == ["disjoint(a, b)", "!leq(a, b)"]
    assert format_script(parsed) == text


@pytest.mark.parametrize(
    "text, line",
    [
        ("script s\nnet toy\nfrom (gen x)\nto (gen x)\napply frob at 0\nend\n", 5),
        ("script s\nnet toy\nfrom (gen x)\nto (gen x)\napply loc at 0 with via\nend\n", 5),
        ("script s\nnet toy\nfrom (gen x)\nto (gen x)\napply loc at 0 with foo=a\nend\n", 5),
        ("script s\nnet toy\nfrom (gen x)\nto (gen x)\napply loc at x\nend\n", 5),
        ("script s\nnet toy\nfrom (gen x)\nto (gen x)\napply loc at 0 with via=a\noverride a = q\nend\n", 6),
        ("script s\nnet toy\nfrom (gen x\nto (gen x)\nend\n", 3),
        ("script s\nfrom (gen x)\nto (gen x)\nend\n", 2),
    ],
)
def test_parse_script_errors_carry_the_line(text, line):
    with pytest.raises(MalformedScript) as info:
        parse_script(text)
    assert info.value.line == line


def test_parse_script_needs_end():
    with pytest.raises(MalformedScript, match="missing 'end'"):
        parse_script("script s\nnet toy\nfrom (gen x)\nto (gen x)\n")
    with pytest.raises(MalformedScript, match="after 'end'"):
        parse_script("script s\nnet toy\nfrom (gen x)\nto (gen x)\nend\nend\n")


def test_run_script_accepts_valid_steps(net):
    for text in (LOC, COMM_OK):
        verdict = run_script(script(text), net)
        assert verdict.accepted, verdict.reason


def test_run_script_names_the_failing_fact(net):
    verdict = run_script(script(COMM_BAD), net)
    assert verdict.status == "rejected"
    assert verdict.step == 1
    assert verdict.reason == "comm: disjoint(a, bb) does not hold"


def test_run_script_checks_requires(net):
    text = COMM_OK.replace("right=b\n", "right=b ; requires leq(a, b)\n")
    verdict = run_script(script(text), net)
    assert not verdict.accepted
    assert verdict.reason == "comm: leq(a, b) does not hold"


def test_run_script_checks_the_end_and_net(net):
    wrong_end = script(LOC.replace("to (gen x)", "to (gen y)"))
    assert "differs from the declared end" in run_script(wrong_end, net).reason
    other_net = script(LOC.replace("net toy", "net other"))
    assert run_script(other_net, net).step == 0


def test_unitarity_and_intertwining(net):
    unit = Script("unit", "toy", parse_term("(mul (uni u) (star (uni u)))"), Term(), (ScriptStep("unit", (0,)),))
    assert run_script(unit, net).accepted
    start = parse_term("(mul (uni u) (app pi q (gen x)) (star (uni u)))")
    intertwined = Script("int", "toy", start, parse_term("(app sigma q (gen x))"), (ScriptStep("int", (0,)),))
    assert run_script(intertwined, net).accepted


def test_mutation_breaks_the_first_side_condition(net):
    original = script(LOC)
    twin = mutate(original, net)
    assert twin.name == "drop-pi-mutated"
    assert str(twin.overrides[-1]) == "override a = ~q"
    verdict = run_script(twin, net)
    assert verdict.status == "rejected" and verdict.step == 0


FUZZ_STARTS = [
    "(app pi q (gen x))",
    "(mul (gen x) (gen y))",
    "(mul (gen x) (gen z))",
    "(mul (uni u) (app pi q (gen x)) (star (uni u)))",
    "(app sigma q (app pi q (gen x)))",
]
FUZZ_REGIONS = ["l", "m", "a", "b", "bb", "c", "t", "q"]
FUZZ_VALUES = FUZZ_REGIONS + ["l'", "q'", "a'", "pi", "sigma", "u", "0", "1", "2", "1+1", "direct", "star", "first"]


def fact_holds(net: NetSpec, fact) -> bool:
    try:
        left, right = net.resolve(fact.left), net.resolve(fact.right)
    except PreconditionViolated:
        return False
    value = net.backend.leq(left, right) if fact.kind == "leq" else is_disjoint(net.backend, left, right)
    return value != fact.negated


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_random_steps_are_accepted_only_when_their_facts_hold(data):
    net = toy_net()
    start = parse_term(data.draw(st.sampled_from(FUZZ_STARTS)))
    overrides = tuple(
        data.draw(
            st.lists(
                st.builds(
                    Override,
                    st.sampled_from(FUZZ_REGIONS),
                    st.sampled_from(FUZZ_REGIONS).map(RegionRef),
                    st.booleans(),
                ),
                max_size=2,
            )
        )
    )
    rule_id = data.draw(st.sampled_from(sorted(rewrite_rules())))
    keys = sorted(rewrite_rules()[rule_id].keys)
    bindings = tuple((k, data.draw(st.sampled_from(FUZZ_VALUES))) for k in keys if data.draw(st.booleans()))
    path = data.draw(st.sampled_from([(0,), (1,), (2,), (0, 0), (1, 0)]))

    step = ScriptStep(rule_id, path, bindings)
    facts = None
    end = start
    try:
        rewrite = apply_rule(net.with_overrides(overrides), start, rule_id, path, dict(bindings))
        facts, end = rewrite.facts, rewrite.term
    except REJECTIONS:
        pass
    verdict = run_script(Script("fuzz", "toy", start, end, (step,), overrides), net)

    if verdict.accepted:
        assert facts is not None
        assert all(fact_holds(net.with_overrides(overrides), f) for f in facts)
    if facts is not None and not all(fact_holds(net.with_overrides(overrides), f) for f in facts):
        assert verdict.status == "rejected"


def test_script_builder_checks_each_step(net):
    builder = ScriptBuilder(net, "swap", parse_term("(mul (gen x) (gen z))"))
    with pytest.raises(ConstructionFailed):
        builder.apply("comm", "0", left="a", right="bb")
    with pytest.raises(ConstructionFailed):
        ScriptBuilder(net, "bad", parse_term("(app pi l (gen x))"))


# swapping disjointly localized sectors -------------------------------------------

NESTED = "(app sigma p (app pi p (gen x)))"
SWAPPED = "(app pi p (app sigma p (gen x)))"

# r and s split p, but p' lies below both r' and s', so nothing separates them
NO_REFLECTION = """
nodes r s p r' s' p'
order r p
order s p
order r s'
order s r'
order p' r'
order p' s'
involution r r'
involution s s'
involution p p'
"""


def swap_net(backend, regions) -> NetSpec:
    return NetSpec(
        "swap",
        backend,
        regions,
        sectors=[SectorSym("pi", "r"), SectorSym("sigma", "s")],
        generators=[AlgSym("x", RegionRef("p"))],
    )


def swap_script(**bindings: str) -> Script:
    step = ScriptStep("disjoint-commute", (0,), tuple(bindings.items()))
    return Script("swap", "swap", parse_term(NESTED), parse_term(SWAPPED), (step,))


@pytest.fixture
def interval_swap_net():
    regions = {
        "p": arc(0, 180),
        "r": arc(20, 70),
        "s": arc(110, 160),
        "a": arc(280, 350),
        "b": arc(190, 260),
        "c": arc(275, 85),
    }
    return swap_net(IntervalBackend(), regions)


def test_disjoint_commute_with_a_reflection(interval_swap_net):
    verdict = run_script(swap_script(a="a", b="b", c="c"), interval_swap_net)
    assert verdict.accepted, verdict.reason


def test_disjoint_commute_checks_the_separating_region(interval_swap_net):
    verdict = run_script(swap_script(a="a", b="b", c="c'"), interval_swap_net)
    assert verdict.status == "rejected"
    assert verdict.reason == "disjoint-commute: leq(r, c') does not hold"


def test_disjoint_commute_needs_the_reflection_bindings(interval_swap_net):
    verdict = run_script(swap_script(), interval_swap_net)
    assert verdict.status == "rejected" and verdict.step == 1
    assert "missing binding a" in verdict.reason


def test_disjoint_commute_rejected_without_any_reflection():
    poset = parse_finite_poset(NO_REFLECTION)
    assert not brute_reflection_exists(poset, "p")
    net = swap_net(poset, {"p": "p", "r": "r", "s": "s"})
    refs = [str(ref) for ref in net.refs()]
    for a, b, c in itertools.product(refs, repeat=3):
        verdict = run_script(swap_script(a=a, b=b, c=c), net)
        assert verdict.status == "rejected", (a, b, c)


# prover ------------------------------------------------------------------------------


def test_check_equal_proves_by_normalization(net):
    verdict = check_equal(net, parse_term("(app pi q (gen x))"), parse_term("(gen x)"))
    assert verdict.status == "proved"
    assert run_script(parse_script(verdict.script), net).accepted


def test_check_equal_refutes_different_generators(net):
    assert check_equal(net, parse_term("(gen x)"), parse_term("(gen y)")).status == "refuted-by-invariant"


def test_check_equal_gives_up_on_overlapping_regions(net):
    verdict = check_equal(net, parse_term("(mul (gen x) (gen z))"), parse_term("(mul (gen z) (gen x))"), budget=50)
    assert verdict.status == "unknown"


def test_check_equal_finds_locality_swaps(net):
    verdict = check_equal(net, parse_term("(mul (gen x) (gen y))"), parse_term("(mul (gen y) (gen x))"))
    assert verdict.status == "proved"


# constructions -----------------------------------------------------------------------


def test_fusion_collapses_inside_the_outer_region(net):
    x = parse_term("(gen x)")
    term = fusion_term(net, "pi", "sigma", "a", "q", "t", (None, None), x)
    assert term == parse_term("(app pi q (app sigma q (gen x)))")
    with pytest.raises(PreconditionViolated):
        fusion_term(net, "pi", "sigma", "a", "q", "b", (None, None), x)


def test_braiding_without_transporters(net):
    term = braiding_term(net, "pi", "sigma", "q", ("a", "c"))
    assert term == parse_term("(mul (app sigma q (one)) (app pi q (one)))")
    assert braiding_term(net, "pi", "sigma", "q", ("a", "c"), reverse=True) == Term(term.factors[::-1])
    with pytest.raises(PreconditionViolated):
        braiding_term(net, "pi", "sigma", "q", ("a", "bb"))
