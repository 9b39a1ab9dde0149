"""The built-in identity corpus.

Every script is constructed step by step with ``ScriptBuilder``, which
applies and checks each rule as it is added, so a corpus entry that does
not hold fails while it is being built rather than when it is replayed.
The nets use exact interval arithmetic when strict duality is enough,
cones for the enlargement-dependent identities and caps for the
symmetric braiding.
"""

import logging
from fractions import Fraction

from sector_verifier.calculus.constructions import braiding_term, fusion_term
from sector_verifier.calculus.membership import ill_formed
from sector_verifier.calculus.netspec import AlgSym, Fact, NetSpec, SectorSym, UnitarySym
from sector_verifier.calculus.rules import apply_rule
from sector_verifier.calculus.scripts import REJECTIONS, Script, ScriptStep
from sector_verifier.calculus.terms import App, Gen, RegionRef, Star, Term, Uni, app, format_term, parse_path
from sector_verifier.errors import ConstructionFailed, PreconditionViolated
from sector_verifier.geometry.cap import CapBackend, swap_configuration
from sector_verifier.geometry.cone import Cone, ConeBackend
from sector_verifier.geometry.interval import Interval, IntervalBackend
from sector_verifier.posets.core import Reflection, Splitting, validate_reflection
from sector_verifier.zigzag.mdz import swap_mdz

logger = logging.getLogger(__name__)

X = Term.of(Gen("x"))


class ScriptBuilder:
    """Accumulates checked steps from a start term.

    Example::

        b = ScriptBuilder(net, "unit", start)
        b.apply("hom-split", "1", requires=["leq(pt, p)"])
        script = b.build(expected)
    """

    def __init__(self, net: NetSpec, name: str, start: Term):
        self.net = net
        self.name = name
        self.start = start
        self.term = start
        self.steps: list[ScriptStep] = []
        bad = ill_formed(net, start)
        if bad is not None:
            raise ConstructionFailed(f"{name}: start term is ill formed", [f"{bad} fails"])

    def apply(self, rule: str, path: str, requires=(), **bindings: str) -> "ScriptBuilder":
        step = ScriptStep(
            rule, parse_path(path), tuple(bindings.items()), tuple(Fact.parse(r) for r in requires)
        )
        where = f"{self.name} step {len(self.steps) + 1} ({step.format()})"
        try:
            rewrite = apply_rule(self.net, self.term, rule, step.path, dict(step.bindings))
            failed = [str(f) for f in [*rewrite.facts, *step.requires] if not self.net.holds(f)]
            bad = ill_formed(self.net, rewrite.term)
        except REJECTIONS as e:
            raise ConstructionFailed(f"{where}: {e}", [format_term(self.term)]) from e
        if failed:
            raise ConstructionFailed(f"{where}: facts do not hold", failed)
        if bad is not None:
            raise ConstructionFailed(f"{where}: result is ill formed", [f"{bad} fails"])
        self.steps.append(step)
        self.term = rewrite.term
        return self

    def build(self, end: Term) -> Script:
        if self.term != end:
            raise ConstructionFailed(
                f"{self.name}: derivation ends at the wrong term", [format_term(self.term), format_term(end)]
            )
        return Script(self.name, self.net.name, self.start, end, tuple(self.steps))


def _arc(start, end) -> Interval:
    return Interval.from_degrees(start, end)


def _suffix(spread: Fraction) -> str:
    return f"-s{str(spread).replace('/', '_')}" if spread else ""


def _grow(net: NetSpec, ref: str) -> str:
    return f"{ref}+1" if net.spread > 0 else ref


def _sectors(**localizations: str) -> list[SectorSym]:
    return [SectorSym(name, loc) for name, loc in localizations.items()]


def _transporter(name: str, source: str, target: str, region: str | None = None) -> UnitarySym:
    return UnitarySym(name, source, target, region)


def _composite(name: str, source: str, target: str, region: str, *word) -> UnitarySym:
    return UnitarySym(name, source, target, region, Term(tuple(word)))


# wiggles: replace one transporter of a braiding by another through a region


def wiggle_first(b: ScriptBuilder, new: str, composite: str, via: str) -> None:
    """Swaps the transporter of the first sector of ``v σ̃(u) u* π(v*)``; composite = new* old."""
    b.apply("unit-intro", "1/0", unitary=new, order="uu*")
    b.apply("fold", "1/1", composite=composite)
    b.apply("hom-split", "1", sizes="1+1")
    b.apply("loc", "2", via=via)
    b.apply("unfold", "2")
    b.apply("unit", "3")


def wiggle_second(b: ScriptBuilder, new: str, composite: str, via: str) -> None:
    """Swaps the transporter of the second sector; composite = old* new."""
    b.apply("unit-intro", "3/1", unitary=new, order="uu*")
    b.apply("fold", "3/0", composite=composite)
    b.apply("hom-split", "3", sizes="1+1")
    b.apply("shift", "2")
    b.apply("loc", "2", via=via)
    b.apply("unfold", "2")
    b.apply("shift", "0")
    b.apply("unit", "1")
    b.apply("shift", "0")


# fusion --------------------------------------------------------------------


def _fusion_net(name: str, regions: dict[str, Interval]) -> NetSpec:
    return NetSpec(
        name,
        IntervalBackend(),
        regions,
        sectors=_sectors(pi="p", sigma="p", pi_a="a", sigma_a="a", pi_b="b", sigma_b="b"),
        unitaries=[
            _transporter("u_a", "pi_a", "pi"),
            _transporter("v_a", "sigma_a", "sigma"),
            _transporter("u_b", "pi_b", "pi"),
            _transporter("v_b", "sigma_b", "sigma"),
            _composite("U", "pi_a", "pi_b", "y", Star(Uni("u_b")), Uni("u_a")),
            _composite("V", "sigma_a", "sigma_b", "y", Star(Uni("v_b")), Uni("v_a")),
        ],
        generators=[AlgSym("x", RegionRef("q"))],
    )


def _fusion_prefix(b: ScriptBuilder) -> None:
    """Rewrites the fusion through a into the one through b around a core

    ``U π^a_p(V) π^a_q(σ^a_q(x)) π^a_p(V*) U*`` at factors 2 to 6.
    """
    b.apply("unit-intro", "0", unitary="u_b", order="uu*")
    b.apply("fold", "1", composite="U")
    b.apply("unit-intro", "2/0", unitary="v_b", order="uu*")
    b.apply("fold", "2/1", composite="V")
    b.apply("hom-split", "2", sizes="1+1")
    b.apply("shift", "1")
    b.apply("unit-intro", "5/1", unitary="v_b", order="uu*")
    b.apply("fold", "5/0", composite="V")
    b.apply("hom-split", "5", sizes="1+1")
    b.apply("unit-intro", "8", unitary="u_b", order="uu*")
    b.apply("fold", "7", composite="U")
    b.apply("shift", "6")


def _fusion_ends(net: NetSpec) -> tuple[Term, Term]:
    start = fusion_term(net, "pi", "sigma", "p", "q", "a", ("u_a", "v_a"), X)
    end = fusion_term(net, "pi", "sigma", "p", "q", "b", ("u_b", "v_b"), X)
    return start, end


def fusion_case_1() -> tuple[Script, NetSpec]:
    """Both indicators on the far side of q: the core commutes out through q'."""
    net = _fusion_net(
        "fusion-1",
        {
            "q": _arc(0, 180),
            "p": _arc(135, 315),
            "y": _arc(190, 300),
            "a": _arc(200, 230),
            "b": _arc(260, 290),
            "s": _arc(170, 10),
        },
    )
    start, end = _fusion_ends(net)
    b = ScriptBuilder(net, "fusion-case-1", start)
    _fusion_prefix(b)
    b.apply("loc", "4/0", via="q")
    b.apply("loc", "4", via="q")
    for i in ("3", "5"):
        b.apply("iso", i, to="y", via="y")
        b.apply("iso", i, to="s", via="y")
        b.apply("iso", i, to="q'", via="q'")
    b.apply("comm", "3", left="q'", right="q")
    b.apply("comm", "2", left="q'", right="q")
    b.apply("hom-merge", "4", count="2")
    b.apply("unit", "4/0")
    b.apply("hom-split", "4")
    b.apply("unit", "3")
    b.apply("loc-intro", "2", sector="sigma_b", region="q", via="q")
    b.apply("loc-intro", "2", sector="pi_b", region="q", via="q")
    return b.build(end), net


def fusion_case_2() -> tuple[Script, NetSpec]:
    """Both indicators inside q: the core is conjugated across in one region r."""
    net = _fusion_net(
        "fusion-2",
        {
            "q": _arc(0, 180),
            "p": _arc(135, 315),
            "y": _arc(137, 175),
            "a": _arc(140, 150),
            "b": _arc(160, 170),
            "r": _arc(350, 185),
        },
    )
    start, end = _fusion_ends(net)
    b = ScriptBuilder(net, "fusion-case-2", start)
    _fusion_prefix(b)
    for i in ("3", "5"):
        b.apply("iso", i, to="y", via="y")
        b.apply("iso", i, to="r", via="y")
    b.apply("iso", "4", to="r", via="q")
    b.apply("hom-merge", "3", count="3")
    b.apply("int", "3/0")
    b.apply("int", "2")
    b.apply("iso", "2", to="q", via="q")
    return b.build(end), net


def fusion_case_3() -> tuple[Script, NetSpec]:
    """a inside q and b outside: conjugation for π, locality for σ."""
    net = _fusion_net(
        "fusion-3",
        {
            "q": _arc(0, 180),
            "p": _arc(135, 315),
            "y": _arc(138, 222),
            "a": _arc(140, 170),
            "b": _arc(190, 220),
            "r": _arc(350, 230),
        },
    )
    start, end = _fusion_ends(net)
    b = ScriptBuilder(net, "fusion-case-3", start)
    _fusion_prefix(b)
    for i in ("3", "5"):
        b.apply("iso", i, to="y", via="y")
        b.apply("iso", i, to="r", via="y")
    b.apply("iso", "4", to="r", via="q")
    b.apply("hom-merge", "3", count="3")
    b.apply("int", "3/0")
    b.apply("loc", "3/0", via="q")
    b.apply("int", "2")
    b.apply("iso", "2", to="q", via="q")
    b.apply("loc-intro", "2/0", sector="sigma_b", region="q", via="q")
    return b.build(end), net


def fusion_localized() -> tuple[Script, NetSpec]:
    """Fusion of sectors localized in p acts trivially on the far side of p."""
    net = NetSpec(
        "locality",
        IntervalBackend(),
        {"p": _arc(0, 90), "q": _arc(180, 270), "pt": _arc(20, 60)},
        sectors=_sectors(pi="p", sigma="p", pi_t="pt", sigma_t="pt"),
        unitaries=[_transporter("u", "pi_t", "pi"), _transporter("v", "sigma_t", "sigma")],
        generators=[AlgSym("x", RegionRef("q"))],
    )
    start = fusion_term(net, "pi", "sigma", "p", "q", "pt", ("u", "v"), X)
    b = ScriptBuilder(net, "fusion-localized", start)
    b.apply("loc", "0/0", via="q")
    b.apply("loc", "0", via="q")
    return b.build(X), net


# tensor product of intertwiners ------------------------------------------------------


def _exchange_net(name: str, pt: Interval) -> NetSpec:
    return NetSpec(
        name,
        IntervalBackend(),
        {"q": _arc(0, 180), "p": _arc(135, 315), "pt": pt},
        sectors=_sectors(sigma="p", sigma_c="p", sigma_t="pt", sigma_ct="pt", pi_ct="pt"),
        unitaries=[
            _transporter("v", "sigma_t", "sigma"),
            _transporter("v_c", "sigma_ct", "sigma_c"),
            UnitarySym("S", "sigma", "sigma_c", unitary=False),
            _composite("W", "sigma_t", "sigma_ct", "pt", Star(Uni("v_c")), Uni("S"), Uni("v")),
        ],
        generators=[AlgSym("x", RegionRef("q"))],
    )


def _exchange_ends() -> tuple[Term, Term]:
    w = app("pi_ct", "pt", Uni("W"))
    start = Term.of(w, app("pi_ct", "q", app("sigma_t", "q", Gen("x"))))
    end = Term.of(app("pi_ct", "q", app("sigma_ct", "q", Gen("x"))), w)
    return start, end


def exchange() -> tuple[Script, NetSpec]:
    """An intertwiner image moves past a fused action when the indicator lies in q."""
    net = _exchange_net("exchange", _arc(140, 170))
    start, end = _exchange_ends()
    b = ScriptBuilder(net, "exchange", start)
    b.apply("iso", "0", to="q", via="pt")
    b.apply("hom-merge", "0")
    b.apply("shift", "0/0")
    b.apply("hom-split", "0")
    b.apply("iso", "1", to="pt", via="pt")
    return b.build(end), net


def exchange_outside() -> tuple[Script, NetSpec]:
    """The same exchange with the indicator on the far side of q."""
    net = _exchange_net("exchange-outside", _arc(200, 230))
    start, end = _exchange_ends()
    b = ScriptBuilder(net, "exchange-outside", start)
    b.apply("loc", "1/0", via="q")
    b.apply("loc", "1", via="q")
    b.apply("comm", "0", left="pt", right="q")
    b.apply("loc-intro", "0", sector="sigma_ct", region="q", via="q")
    b.apply("loc-intro", "0", sector="pi_ct", region="q", via="q")
    return b.build(end), net


def associativity() -> tuple[Script, NetSpec]:
    """((π ∘ σ) ∘ τ)_q and (π ∘ (σ ∘ τ))_q agree once the transporters are grouped."""
    net = NetSpec(
        "associativity",
        IntervalBackend(),
        {"q": _arc(0, 180), "p": _arc(135, 315), "p1": _arc(140, 170)},
        sectors=_sectors(pi="p", sigma="p", tau="p", pi1="p1", sigma1="p1", tau1="p1"),
        unitaries=[
            _transporter("u1", "pi1", "pi"),
            _transporter("v1", "sigma1", "sigma"),
            _transporter("w1", "tau1", "tau"),
        ],
        generators=[AlgSym("x", RegionRef("q"))],
    )
    core = app("pi1", "q", app("sigma1", "q", app("tau1", "q", Gen("x"))))
    inner = app("sigma1", "p", Uni("w1"))
    inner_star = app("sigma1", "p", Star(Uni("w1")))
    start = Term.of(
        Uni("u1"),
        app("pi1", "p", Uni("v1")),
        app("pi1", "p", inner),
        core,
        app("pi1", "p", inner_star),
        app("pi1", "p", Star(Uni("v1"))),
        Star(Uni("u1")),
    )
    end = Term.of(
        Uni("u1"),
        app("pi1", "p", Uni("v1"), inner),
        core,
        app("pi1", "p", inner_star, Star(Uni("v1"))),
        Star(Uni("u1")),
    )
    b = ScriptBuilder(net, "associativity", start)
    b.apply("hom-merge", "1", requires=["leq(p1, p)", "leq(p1, q)"], count="2")
    b.apply("hom-merge", "3", count="2")
    return b.build(end), net


def unit_law() -> tuple[Script, NetSpec]:
    """Fusion with the trivial sector gives back the sector."""
    net = NetSpec(
        "unit",
        IntervalBackend(),
        {"q": _arc(0, 180), "p": _arc(135, 315), "pt": _arc(140, 170)},
        sectors=[SectorSym("pi", "p"), SectorSym("pi_t", "pt"), SectorSym("one", identity=True)],
        unitaries=[_transporter("u", "pi_t", "pi")],
        generators=[AlgSym("x", RegionRef("q"))],
    )
    start = fusion_term(net, "pi", "one", "p", "q", "pt", ("u", None), X)
    b = ScriptBuilder(net, "unit", start)
    b.apply("hom-split", "1", requires=["leq(pt, p)"])
    b.apply("hom-split", "2")
    b.apply("loc", "1/0", via="q")
    b.apply("int", "0")
    return b.build(Term.of(app("pi", "q", Gen("x")))), net


# inclusion ---------------------------------------------------------------------


def _inclusion_net() -> NetSpec:
    return NetSpec(
        "inclusion",
        IntervalBackend(),
        {
            "q": _arc(0, 180),
            "a": _arc(135, 315),
            "b": _arc(100, 330),
            "at": _arc(140, 170),
            "r": _arc(150, 200),
            "s": _arc(250, 300),
        },
        sectors=_sectors(pi="a", sigma="a", pi_t="at", sigma_t="at", pi_r="r", sigma_s="s"),
        unitaries=[
            _transporter("u", "pi_t", "pi"),
            _transporter("v", "sigma_t", "sigma"),
            _transporter("u_r", "pi_r", "pi"),
            _transporter("v_s", "sigma_s", "sigma"),
        ],
        generators=[AlgSym("x", RegionRef("q"))],
    )


def inclusion_strict() -> tuple[Script, NetSpec]:
    """Fusion computed in a region a equals the one computed in any b above a."""
    net = _inclusion_net()
    start = fusion_term(net, "pi", "sigma", "a", "q", "at", ("u", "v"), X)
    end = fusion_term(net, "pi", "sigma", "b", "q", "at", ("u", "v"), X)
    b = ScriptBuilder(net, "inclusion-strict", start)
    b.apply("iso", "1", to="b", via="a")
    b.apply("iso", "3", to="b", via="a")
    return b.build(end), net


def braided_inclusion() -> tuple[Script, NetSpec]:
    """The braiding computed in a equals the one computed in b above a."""
    net = _inclusion_net()
    start = braiding_term(net, "pi", "sigma", "a", ("r", "s"), ("u_r", "v_s"))
    end = braiding_term(net, "pi", "sigma", "b", ("r", "s"), ("u_r", "v_s"))
    b = ScriptBuilder(net, "braided-inclusion", start)
    b.apply("iso", "1", to="b", via="a")
    b.apply("iso", "3", to="b", via="a")
    return b.build(end), net


# braiding -----------------------------------------------------------------------


def _braiding_net() -> NetSpec:
    return NetSpec(
        "braiding",
        IntervalBackend(),
        {
            "p": _arc(0, 180),
            "r": _arc(20, 70),
            "s": _arc(110, 160),
            "a": _arc(280, 350),
            "b": _arc(190, 260),
            "c": _arc(275, 85),
        },
        sectors=_sectors(
            pi="p",
            sigma="p",
            pi_c="p",
            tau="p",
            pi_r="r",
            pi_r2="r",
            pi_rc="r",
            sigma_r="r",
            sigma_s="s",
            sigma_s2="s",
            tau_s="s",
        ),
        unitaries=[
            _transporter("u_r", "pi_r", "pi"),
            _transporter("u_r2", "pi_r2", "pi"),
            _transporter("u_c", "pi_rc", "pi_c"),
            _transporter("v_s", "sigma_s", "sigma"),
            _transporter("v_s2", "sigma_s2", "sigma"),
            _transporter("v_r", "sigma_r", "sigma"),
            _transporter("w", "tau_s", "tau"),
            UnitarySym("T", "pi", "pi_c", unitary=False),
            _composite("W1", "pi_r", "pi_r2", "r", Star(Uni("u_r2")), Uni("u_r")),
            _composite("W2", "sigma_s2", "sigma_s", "s", Star(Uni("v_s")), Uni("v_s2")),
            _composite("X", "pi_r", "pi_rc", "r", Star(Uni("u_c")), Uni("T"), Uni("u_r")),
        ],
    )


def braiding_independence() -> tuple[Script, NetSpec]:
    """The braiding does not depend on the choice of transporters."""
    net = _braiding_net()
    start = braiding_term(net, "pi", "sigma", "p", ("r", "s"), ("u_r", "v_s"))
    end = braiding_term(net, "pi", "sigma", "p", ("r", "s"), ("u_r2", "v_s2"))
    b = ScriptBuilder(net, "braiding-independence", start)
    wiggle_first(b, "u_r2", "W1", "r")
    wiggle_second(b, "v_s2", "W2", "s")
    return b.build(end), net


def reverse_braiding() -> tuple[Script, NetSpec]:
    """The reverse braiding inverts the braiding."""
    net = _braiding_net()
    start = braiding_term(net, "pi", "sigma", "p", ("r", "s"), ("u_r", "v_s")) + braiding_term(
        net, "pi", "sigma", "p", ("r", "s"), ("u_r", "v_s"), reverse=True
    )
    b = ScriptBuilder(net, "reverse-braiding", start)
    b.apply("shift", "0", requires=["disjoint(r, s)"])
    b.apply("shift", "4")
    b.apply("hom-merge", "3", count="2")
    b.apply("unit", "3/0")
    b.apply("hom-split", "3")
    b.apply("unit", "2")
    b.apply("unit", "1")
    b.apply("hom-merge", "0")
    b.apply("unit", "0/0")
    b.apply("hom-split", "0")
    return b.build(Term()), net


def naturality() -> tuple[Script, NetSpec]:
    """β(π', σ) (T ⊗ 1) = (1 ⊗ T) β(π, σ) for T: π → π'."""
    net = _braiding_net()
    start = braiding_term(net, "pi_c", "sigma", "p", ("r", "s"), ("u_c", "v_s")) + Term.of(Uni("T"))
    end = Term.of(app("sigma", "p", Uni("T"))) + braiding_term(net, "pi", "sigma", "p", ("r", "s"), ("u_r", "v_s"))
    b = ScriptBuilder(net, "naturality", start)
    b.apply("shift", "3")
    b.apply("unit-intro", "4", unitary="u_r", order="uu*")
    b.apply("fold", "2", composite="X")
    b.apply("loc-intro", "2", sector="sigma_s", region="p", via="r")
    b.apply("hom-merge", "1", count="2")
    b.apply("unfold", "1/1")
    b.apply("unit", "1/0")
    b.apply("hom-split", "1", sizes="1+1")
    b.apply("shift", "0")
    return b.build(end), net


def monoidality() -> tuple[Script, NetSpec]:
    """β(π ⊗ σ, τ) = (β(π, τ) ⊗ 1)(1 ⊗ β(σ, τ))."""
    net = _braiding_net()
    start = Term.of(
        Uni("w"),
        app("tau_s", "p", Uni("u_r"), app("pi_r", "p", Uni("v_r"))),
        app("pi_r", "p", Star(Uni("v_r"))),
        Star(Uni("u_r")),
        app("pi", "p", app("sigma", "p", Star(Uni("w")))),
    )
    inner = braiding_term(net, "sigma", "tau", "p", ("r", "s"), ("v_r", "w"))
    end = braiding_term(net, "pi", "tau", "p", ("r", "s"), ("u_r", "w")) + Term.of(App("pi", RegionRef("p"), inner))
    b = ScriptBuilder(net, "monoidality", start)
    b.apply("hom-split", "1", sizes="1+1")
    b.apply("disjoint-commute", "2", a="a", b="b", c="c")
    b.apply("hom-merge", "2", count="2")
    b.apply("shift", "2")
    b.apply("hom-merge", "3", count="2")
    b.apply("unit-intro", "3/0", unitary="w", order="u*u")
    b.apply("hom-split", "3", sizes="1+4")
    return b.build(end), net


def disjoint_commute() -> tuple[Script, NetSpec]:
    """Sectors localized in the two halves of a splitting commute, via a reflection."""
    backend = IntervalBackend()
    regions = {
        "p": _arc(0, 180),
        "r1": _arc(100, 170),
        "s1": _arc(10, 80),
        "a": _arc(190, 260),
        "b": _arc(280, 350),
        "c": _arc(95, 265),
    }
    splitting = Splitting(regions["p"], regions["r1"], regions["s1"])
    reflection = Reflection(splitting, regions["a"], regions["b"], regions["c"])
    report = validate_reflection(backend, reflection)
    if not report.ok:
        raise ConstructionFailed("disjoint-commute: the reflection is invalid", [report.summary()])
    net = NetSpec(
        "reflection",
        backend,
        regions,
        sectors=_sectors(pi="p", sigma="p", pi_r1="r1", sigma_s1="s1", pi_a="a"),
        unitaries=[
            _transporter("u_a", "pi_a", "pi_r1", "c"),
            _transporter("u", "pi_r1", "pi"),
            _transporter("v", "sigma_s1", "sigma"),
        ],
        generators=[AlgSym("x", RegionRef("p"))],
    )
    start = Term.of(
        Uni("v"),
        app("sigma_s1", "p", Uni("u")),
        app("pi_r1", "p", app("sigma_s1", "p", Gen("x"))),
        app("sigma_s1", "p", Star(Uni("u"))),
        Star(Uni("v")),
    )
    end = Term.of(app("sigma", "p", app("pi", "p", Gen("x"))))
    b = ScriptBuilder(net, "disjoint-commute", start)
    b.apply("int-rev", "2", unitary="u_a", form="direct")
    b.apply("loc", "3", via="p")
    b.apply("loc-intro", "3/0", sector="pi_a", region="p", via="p")
    b.apply("loc-intro", "2", sector="sigma_s1", region="b'", via="c")
    b.apply("loc-intro", "4", sector="sigma_s1", region="b'", via="c")
    for i in ("1", "3", "5"):
        b.apply("iso", i, to="b'", via="p")
    b.apply("hom-merge", "1", count="5")
    b.apply("int", "1/1")
    b.apply("int", "1/0")
    b.apply("iso", "1", to="p", via="p")
    b.apply("int", "0")
    return b.build(end), net


def symmetric_braiding() -> tuple[Script, NetSpec]:
    """With three mutually separated places the braiding of (r1, r2) equals that of (r2, r1).

    The three-element swap drives the script: every link of the swap
    replaces one transporter through the region of that link.
    """
    backend = CapBackend()
    p, rs, ss = swap_configuration()
    m = swap_mdz(backend, p, rs, ss)
    names = {p: "p", **{r: f"r{k}" for k, r in enumerate(rs, 1)}, **{s: f"s{k}" for k, s in enumerate(ss, 1)}}
    moves: list[tuple[str, str, str, str]] = []
    for i in range(m.n):
        for row, side in ((m.top, "first"), (m.bottom, "second")):
            old, new = names[row.z[i]], names[row.z[i + 1]]
            if old != new:
                moves.append((side, old[1:], new[1:], names[row.y[i]]))
    composites = []
    for side, old, new, via in moves:
        if side == "first":
            word = (Star(Uni(f"u{new}")), Uni(f"u{old}"))
            composites.append(_composite(f"pi_{old}_{new}", f"pi{old}", f"pi{new}", via, *word))
        else:
            word = (Star(Uni(f"v{old}")), Uni(f"v{new}"))
            composites.append(_composite(f"sigma_{new}_{old}", f"sigma{new}", f"sigma{old}", via, *word))
    net = NetSpec(
        "symmetric",
        backend,
        {name: element for element, name in names.items()},
        sectors=[SectorSym("pi", "p"), SectorSym("sigma", "p")]
        + [SectorSym(f"{s}{k}", f"r{k}") for s in ("pi", "sigma") for k in (1, 2, 3)],
        unitaries=[_transporter(f"u{k}", f"pi{k}", "pi") for k in (1, 2, 3)]
        + [_transporter(f"v{k}", f"sigma{k}", "sigma") for k in (1, 2, 3)]
        + composites,
    )
    start = braiding_term(net, "pi", "sigma", "p", ("r1", "r2"), ("u1", "v2"))
    end = braiding_term(net, "pi", "sigma", "p", ("r2", "r1"), ("u2", "v1"))
    b = ScriptBuilder(net, "symmetric-braiding", start)
    for composite, (side, old, new, via) in zip(composites, moves):
        if side == "first":
            wiggle_first(b, f"u{new}", composite.name, via)
        else:
            wiggle_second(b, f"v{new}", composite.name, via)
    return b.build(end), net


# identities that depend on the spread ---------------------------------------------


def spread_localized(spread=0) -> tuple[Script, NetSpec]:
    """Fusion of sectors localized in a cone acts trivially on its complement."""
    spread = Fraction(spread)
    d = 10 + 4 * spread
    net = NetSpec(
        f"spread-fusion{_suffix(spread)}",
        ConeBackend(),
        {
            "l": Cone.from_degrees(0, 0, 0, 90),
            "lc": Cone.from_degrees(0, 0, 90, 0),
            "lt": Cone.from_degrees(d, d, 0, 90),
        },
        spread,
        sectors=_sectors(pi="l", sigma="l", pi_t="lt", sigma_t="lt"),
        unitaries=[_transporter("u", "pi_t", "pi", "l"), _transporter("v", "sigma_t", "sigma", "l")],
        generators=[AlgSym("x", RegionRef("lc"))],
    )
    outer, far = _grow(net, "l"), _grow(net, "lc")
    start = Term.of(
        Uni("u"),
        app("pi_t", outer, Uni("v")),
        app("pi_t", far, app("sigma_t", "lc", Gen("x"))),
        app("pi_t", outer, Star(Uni("v"))),
        Star(Uni("u")),
    )
    if net.spread > 0 and start != fusion_term(net, "pi", "sigma", "l", "lc", "lt", ("u", "v"), X):
        raise PreconditionViolated("spread fusion term does not match its construction")
    b = ScriptBuilder(net, f"spread-localized{_suffix(spread)}", start)
    b.apply("loc", "2/0", requires=["leq(lt, l)"], via="lc")
    b.apply("loc", "2", via="lc")
    b.apply("shift", "0")
    b.apply("shift", "3")
    b.apply("comm-dual", "1", right="lc")
    b.apply("unit", "2")
    b.apply("loc-intro", "1", sector="pi", region="lc", via="lc")
    b.apply("comm-dual", "0", right="lc")
    b.apply("hom-merge", "1", count="2")
    b.apply("unit", "1/0")
    b.apply("hom-split", "1")
    b.apply("loc", "0", via="lc")
    return b.build(X), net


def spread_braiding(spread=0) -> tuple[Script, NetSpec]:
    """Independence of the braiding from the transporters, for cones with spread."""
    spread = Fraction(spread)
    k = 20 + 2 * spread
    net = NetSpec(
        f"spread-braiding{_suffix(spread)}",
        ConeBackend(),
        {
            "p": Cone.from_degrees(0, 0, 0, 180),
            "r": Cone.from_degrees(-k, 5, 90, 180),
            "s": Cone.from_degrees(k, 5, 0, 90),
        },
        spread,
        sectors=_sectors(pi="p", sigma="p", pi_r="r", pi_r2="r", sigma_s="s", sigma_s2="s"),
        unitaries=[
            _transporter("u_r", "pi_r", "pi", "p"),
            _transporter("u_r2", "pi_r2", "pi", "p"),
            _transporter("v_s", "sigma_s", "sigma", "p"),
            _transporter("v_s2", "sigma_s2", "sigma", "p"),
            _composite("W1", "pi_r", "pi_r2", "r", Star(Uni("u_r2")), Uni("u_r")),
            _composite("W2", "sigma_s2", "sigma_s", "s", Star(Uni("v_s")), Uni("v_s2")),
        ],
    )
    start = braiding_term(net, "pi", "sigma", "p", ("r", "s"), ("u_r", "v_s"))
    end = braiding_term(net, "pi", "sigma", "p", ("r", "s"), ("u_r2", "v_s2"))
    b = ScriptBuilder(net, f"spread-braiding{_suffix(spread)}", start)
    wiggle_first(b, "u_r2", "W1", _grow(net, "r"))
    wiggle_second(b, "v_s2", "W2", _grow(net, "s"))
    return b.build(end), net


def _transport_net(spread: Fraction) -> NetSpec:
    return NetSpec(
        f"transport{_suffix(spread)}",
        ConeBackend(),
        {"q": Cone.from_degrees(0, 0, 0, 90), "l": Cone.from_degrees(10, 10, 0, 90)},
        spread,
        sectors=[
            SectorSym("pi_A", "l"),
            SectorSym("sigma_A", "l"),
            SectorSym("pi_B", "l+1", transport_of="pi_A"),
            SectorSym("sigma_B", "l+1", transport_of="sigma_A"),
            SectorSym("pi_BA", "l+2", transport_of="pi_B"),
        ],
        unitaries=[_transporter("u", "pi_A", "sigma_A", "l")],
        generators=[AlgSym("x", RegionRef("q"))],
        transport_steps=1,
    )


def transport(spread=0) -> tuple[Script, NetSpec]:
    """Transporting a sector to the larger net and back gives the sector again."""
    spread = Fraction(spread)
    net = _transport_net(spread)
    b = ScriptBuilder(net, f"transport{_suffix(spread)}", Term.of(app("pi_A", "q", Gen("x"))))
    b.apply("iso", "0", requires=["leq(l, q)"], to="q+2", via="q")
    b.apply("transport-back", "0", sector="pi_B", to="q+1")
    b.apply("transport-back", "0", sector="pi_BA", to="q")
    return b.build(Term.of(app("pi_BA", "q", Gen("x")))), net


def transport_intertwiner(spread=0) -> tuple[Script, NetSpec]:
    """Intertwiners of the smaller net intertwine the transported sectors."""
    spread = Fraction(spread)
    net = _transport_net(spread)
    start = Term.of(Uni("u"), app("pi_B", "q", Gen("x")), Star(Uni("u")))
    b = ScriptBuilder(net, f"transport-intertwiner{_suffix(spread)}", start)
    b.apply("transport", "1", requires=["leq(l, q)"])
    b.apply("int", "0")
    b.apply("transport-back", "0", sector="sigma_B", to="q")
    return b.build(Term.of(app("sigma_B", "q", Gen("x")))), net


SPREAD_BUILDERS = (spread_localized, spread_braiding, transport, transport_intertwiner)

STRICT_BUILDERS = (
    fusion_case_1,
    fusion_case_2,
    fusion_case_3,
    fusion_localized,
    exchange,
    exchange_outside,
    associativity,
    unit_law,
    inclusion_strict,
    braided_inclusion,
    braiding_independence,
    reverse_braiding,
    naturality,
    monoidality,
    disjoint_commute,
    symmetric_braiding,
)


def identity_corpus(spread=0) -> list[tuple[Script, NetSpec]]:
    """The built-in scripts with their nets.

    With spread 0 every identity is returned, the spread-dependent ones
    built without enlargement; with a positive spread only those.

    Raises:
        ConstructionFailed: If an entry no longer derives.
    """
    spread = Fraction(spread)
    if spread < 0:
        raise PreconditionViolated("spread must be >= 0")
    pairs = [] if spread > 0 else [build() for build in STRICT_BUILDERS]
    pairs += [build(spread) for build in SPREAD_BUILDERS]
    logger.info("built %d identity script(s) at spread %s", len(pairs), spread)
    return pairs
