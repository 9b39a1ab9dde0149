"""Rewrite rules of the sector calculus.

Each rule rewrites the word addressed by a path at its last index and
returns the poset facts the step relies on. Rules never check facts
themselves; the script runner does, so that a rejected step can name the
failing fact.

Registered rules, by id:

    iso               π_q(t) = π_to(t) for t in A(via), via ≤ q, to
    loc               π_q(t) = t for t in A(via), via ≤ q, via ≤ l'
    loc-intro         the inverse of loc on a block of ``count`` factors
    comm              swap two blocks living in disjoint regions
    comm-dual         swap a block of intertwiners or generators with a block in A(m)
    unit, unit-intro  u u* = u* u = 1 for unitary u
    hom-split         π_q(ab) = π_q(a) π_q(b); an empty body drops the application
    hom-merge         the inverse of hom-split
    hom-unit          insert π_q(1)
    int, int-rev      u π_q(t) u* = σ_q(t) for u: π → σ
    shift             u π_q(t) = σ_q(t) u for any intertwiner u: π → σ
    fold, unfold      replace a composite's defining word by its symbol
    transport         π^B_q(t) = π^A_{q+k}(t)
    transport-back    the inverse of transport
    disjoint-commute  σ_q(π_q(t)) = π_q(σ_q(t)) for π, σ localized in a splitting that has a reflection
"""

import logging
from dataclasses import dataclass
from typing import Callable

from sector_verifier.calculus.membership import membership
from sector_verifier.calculus.netspec import Fact, NetSpec, SectorSym, disjoint, leq
from sector_verifier.calculus.terms import (
    ONE,
    App,
    Atom,
    Path,
    RegionRef,
    Star,
    Term,
    Uni,
    edit_at,
    format_path,
    is_intertwiner,
)
from sector_verifier.errors import MalformedScript, RewriteError

logger = logging.getLogger(__name__)

Bindings = dict[str, str]
RuleFn = Callable[[NetSpec, Term, int, Bindings], tuple[Term, list[Fact]]]


@dataclass(frozen=True)
class Rule:
    id: str
    keys: frozenset[str]
    fn: RuleFn
    summary: str


@dataclass(frozen=True)
class Rewrite:
    term: Term
    facts: list[Fact]


_RULES: dict[str, Rule] = {}


def rule(rule_id: str, *keys: str):
    """Registers a word rewrite under rule_id, accepting the given binding keys."""

    def register(fn: RuleFn) -> RuleFn:
        summary = (fn.__doc__ or "").strip().splitlines()[0] if fn.__doc__ else rule_id
        _RULES[rule_id] = Rule(rule_id, frozenset(keys), fn, summary)
        return fn

    return register


def rewrite_rules() -> dict[str, Rule]:
    return dict(_RULES)


def check_bindings(rule_id: str, bindings: Bindings) -> None:
    """Raises MalformedScript for an unknown rule or binding key."""
    if rule_id not in _RULES:
        raise MalformedScript(f"unknown rule {rule_id!r}")
    unknown = set(bindings) - _RULES[rule_id].keys
    if unknown:
        raise MalformedScript(f"rule {rule_id} does not take {', '.join(sorted(unknown))}")


def apply_rule(net: NetSpec, term: Term, rule_id: str, path: Path, bindings: Bindings) -> Rewrite:
    """Applies one rule at path and returns the new term with the facts it needs.

    Raises:
        RewriteError: If the rule does not match at path.
        MalformedScript: For an unknown rule or binding key.
    """
    check_bindings(rule_id, bindings)
    fn = _RULES[rule_id].fn
    facts: list[Fact] = []

    def edit(word: Term, i: int) -> Term:
        new, fs = fn(net, word, i, bindings)
        facts.extend(fs)
        return new

    new_term = edit_at(term, path, edit)
    logger.debug("%s at %s: %d fact(s)", rule_id, format_path(path), len(facts))
    return Rewrite(new_term, facts)


# binding and shape helpers -------------------------------------------------


def _get(b: Bindings, key: str, default: str | None = None) -> str:
    value = b.get(key, default)
    if value is None:
        raise RewriteError(f"missing binding {key}")
    return value


def _ref(b: Bindings, key: str) -> RegionRef:
    try:
        return RegionRef.parse(_get(b, key))
    except MalformedScript as e:
        raise RewriteError(str(e)) from e


def _int(b: Bindings, key: str, default: int) -> int:
    raw = b.get(key)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise RewriteError(f"binding {key} must be an integer, got {raw!r}") from None
    if value < 0:
        raise RewriteError(f"binding {key} must be >= 0")
    return value


def _sizes(raw: str) -> list[int]:
    try:
        sizes = [int(part) for part in raw.split("+")]
    except ValueError:
        raise RewriteError(f"bad sizes {raw!r}") from None
    if any(n < 0 for n in sizes):
        raise RewriteError(f"bad sizes {raw!r}")
    return sizes


def _at(word: Term, i: int) -> Atom:
    if i >= len(word):
        raise RewriteError(f"index {i} is past the end of a word of length {len(word)}")
    return word[i]


def _app_at(word: Term, i: int) -> App:
    atom = _at(word, i)
    if not isinstance(atom, App):
        raise RewriteError(f"factor {i} is not an application")
    return atom


def _block(word: Term, i: int, n: int) -> Term:
    if i + n > len(word):
        raise RewriteError(f"block of {n} at {i} runs past the end of a word of length {len(word)}")
    return word[i : i + n]


def _intertwiner(atom: Atom) -> tuple[str, bool] | None:
    """(name, starred) for an intertwiner atom."""
    if isinstance(atom, Uni):
        return atom.name, False
    if isinstance(atom, Star) and isinstance(atom.atom, Uni):
        return atom.atom.name, True
    return None


def _localization_fact(sector: SectorSym, via: RegionRef) -> list[Fact]:
    if sector.identity:
        return []
    if sector.loc is None:
        raise RewriteError(f"sector {sector.name} is not localized")
    return [leq(via, sector.loc.flipped())]


def _require_unitary(net: NetSpec, name: str) -> None:
    if not net.is_unitary(name):
        raise RewriteError(f"{name} is not unitary")


# isotony and localization ----------------------------------------------------


@rule("iso", "to", "via")
def _iso(net, word, i, b):
    """Moves an application to another outer region through a common lower region."""
    a = _app_at(word, i)
    to, via = _ref(b, "to"), _ref(b, "via")
    facts = membership(net, a.body, via) + [leq(via, a.region), leq(via, to)]
    return word.replace(i, i + 1, Term.of(App(a.sector, to, a.body))), facts


@rule("loc", "via")
def _loc(net, word, i, b):
    """Drops an application whose body lives away from the localization."""
    a = _app_at(word, i)
    via = _ref(b, "via")
    sector = net.sector(a.sector)
    facts = membership(net, a.body, via) + [leq(via, a.region)] + _localization_fact(sector, via)
    return word.replace(i, i + 1, a.body), facts


@rule("loc-intro", "sector", "region", "count", "via")
def _loc_intro(net, word, i, b):
    """Wraps a block in an application that acts trivially on it."""
    sector = net.sector(_get(b, "sector"))
    region, via = _ref(b, "region"), _ref(b, "via")
    count = _int(b, "count", 1)
    block = _block(word, i, count)
    facts = membership(net, block, via) + [leq(via, region)] + _localization_fact(sector, via)
    return word.replace(i, i + count, Term.of(App(sector.name, region, block))), facts


# locality ----------------------------------------------------------------------


def _two_blocks(word: Term, i: int, b: Bindings) -> tuple[Term, Term]:
    sizes = _sizes(b.get("widths", "1+1"))
    if len(sizes) != 2 or 0 in sizes:
        raise RewriteError("widths takes two positive sizes")
    first = _block(word, i, sizes[0])
    second = _block(word, i + sizes[0], sizes[1])
    return first, second


@rule("comm", "left", "right", "widths")
def _comm(net, word, i, b):
    """Swaps adjacent blocks that live in disjoint regions."""
    first, second = _two_blocks(word, i, b)
    left, right = _ref(b, "left"), _ref(b, "right")
    facts = membership(net, first, left) + membership(net, second, right) + [disjoint(left, right)]
    return word.replace(i, i + len(first) + len(second), second + first), facts


def _dual_facts(net: NetSpec, block: Term, m: RegionRef) -> list[Fact]:
    """Facts that make every factor of block commute with the algebra of m."""
    facts: list[Fact] = []
    for atom in block:
        if isinstance(atom, App):
            raise RewriteError("the commuting block may not contain applications")
        found = _intertwiner(atom)
        if found is None:
            g = net.generator((atom.atom if isinstance(atom, Star) else atom).name)
            facts.append(disjoint(g.region, m))
            continue
        u = net.unitary(found[0])
        region = net.unitary_region(u.name)
        for end in (u.source, u.target):
            loc = net.sector(end).loc
            if loc is not None:
                facts.append(leq(loc, region, "member"))
        facts.append(disjoint(region, m))
    return facts


@rule("comm-dual", "right", "widths", "dual")
def _comm_dual(net, word, i, b):
    """Swaps a block of intertwiners or generators past a block in A(right).

    With two applications of one sector, the first at region a and the
    other at ``right``, the bodies are compared instead; the commutant of
    A(right) then has to sit inside the algebra of a.
    """
    first, second = _two_blocks(word, i, b)
    m = _ref(b, "right")
    which = b.get("dual", "first")
    if which not in ("first", "second"):
        raise RewriteError(f"dual must be first or second, got {which!r}")
    dual, other = (first, second) if which == "first" else (second, first)
    if len(dual) == 1 and len(other) == 1 and isinstance(dual[0], App) and isinstance(other[0], App):
        d, o = dual[0], other[0]
        if d.sector != o.sector or o.region != m:
            raise RewriteError("both applications must use one sector, the other at the commuting region")
        outer = m.flipped().enlarged() if net.spread > 0 else m.flipped()
        facts = (
            _dual_facts(net, d.body, m)
            + membership(net, d.body, d.region)
            + membership(net, o.body, m)
            + [leq(outer, d.region)]
        )
    else:
        facts = _dual_facts(net, dual, m) + membership(net, other, m)
    return word.replace(i, i + len(first) + len(second), second + first), facts


@rule("disjoint-commute", "a", "b", "c")
def _disjoint_commute(net, word, i, b):
    """Exchanges two nested applications of sectors localized in a splitting with a reflection.

    The inner localization r and the outer one s split the region q; the
    bindings a, b split q' and c separates them, with r, a ≤ c and s, b ≤ c'.
    """
    outer = _app_at(word, i)
    if len(outer.body) != 1 or not isinstance(outer.body[0], App) or outer.body[0].region != outer.region:
        raise RewriteError("expected an application wrapping one application at the same region")
    inner = outer.body[0]
    r, s = net.sector(inner.sector).loc, net.sector(outer.sector).loc
    if r is None or s is None:
        raise RewriteError("both sectors must be localized")
    a, bb, c = _ref(b, "a"), _ref(b, "b"), _ref(b, "c")
    q = outer.region
    facts = [
        disjoint(r, s),
        leq(r, q),
        leq(s, q),
        disjoint(a, bb),
        leq(a, q.flipped()),
        leq(bb, q.flipped()),
        leq(r, c),
        leq(a, c),
        leq(s, c.flipped()),
        leq(bb, c.flipped()),
    ]
    swapped = App(inner.sector, q, Term.of(App(outer.sector, q, inner.body)))
    return word.replace(i, i + 1, Term.of(swapped)), facts


# unitarity -----------------------------------------------------------------------


@rule("unit")
def _unit(net, word, i, b):
    """Cancels u u* or u* u."""
    first, second = _intertwiner(_at(word, i)), _intertwiner(_at(word, i + 1))
    if first is None or second is None or first[0] != second[0] or first[1] == second[1]:
        raise RewriteError(f"factors {i} and {i + 1} are not an intertwiner and its adjoint")
    _require_unitary(net, first[0])
    return word.replace(i, i + 2, ONE), []


@rule("unit-intro", "unitary", "order")
def _unit_intro(net, word, i, b):
    """Inserts u u* or u* u before factor i."""
    name = _get(b, "unitary")
    net.unitary(name)
    _require_unitary(net, name)
    if i > len(word):
        raise RewriteError(f"index {i} is past the end of the word")
    order = b.get("order", "uu*")
    pair = {"uu*": (Uni(name), Star(Uni(name))), "u*u": (Star(Uni(name)), Uni(name))}.get(order)
    if pair is None:
        raise RewriteError(f"order must be uu* or u*u, got {order!r}")
    return word.replace(i, i, Term(pair)), []


# homomorphism ----------------------------------------------------------------------


@rule("hom-split", "sizes")
def _hom_split(net, word, i, b):
    """Splits an application over its body; an empty body with no sizes disappears."""
    a = _app_at(word, i)
    raw = b.get("sizes")
    sizes = _sizes(raw) if raw is not None else [1] * len(a.body)
    if sum(sizes) != len(a.body):
        raise RewriteError(f"sizes {raw} do not add up to the body length {len(a.body)}")
    pieces, start = [], 0
    for n in sizes:
        pieces.append(App(a.sector, a.region, a.body[start : start + n]))
        start += n
    return word.replace(i, i + 1, Term(tuple(pieces))), []


@rule("hom-merge", "count")
def _hom_merge(net, word, i, b):
    """Merges consecutive applications of one sector at one region."""
    count = _int(b, "count", 2)
    if count < 1:
        raise RewriteError("count must be positive")
    apps = _block(word, i, count)
    first = apps[0]
    if not all(isinstance(a, App) and a.sector == first.sector and a.region == first.region for a in apps):
        raise RewriteError(f"the {count} factors at {i} are not applications of one sector at one region")
    body = ONE
    for a in apps:
        body = body + a.body
    return word.replace(i, i + count, Term.of(App(first.sector, first.region, body))), []


@rule("hom-unit", "sector", "region")
def _hom_unit(net, word, i, b):
    """Inserts an application to the empty word."""
    sector = net.sector(_get(b, "sector"))
    if i > len(word):
        raise RewriteError(f"index {i} is past the end of the word")
    return word.replace(i, i, Term.of(App(sector.name, _ref(b, "region"), ONE))), []


# intertwining ----------------------------------------------------------------------


@rule("int")
def _int_rule(net, word, i, b):
    """u π_q(t) u* becomes σ_q(t), and u* σ_q(t) u becomes π_q(t)."""
    left, a, right = _intertwiner(_at(word, i)), _at(word, i + 1), _intertwiner(_at(word, i + 2))
    if left is None or right is None or not isinstance(a, App) or left[0] != right[0] or left[1] == right[1]:
        raise RewriteError(f"factors {i}..{i + 2} are not u, an application and u*")
    u = net.unitary(left[0])
    _require_unitary(net, u.name)
    come, go = (u.target, u.source) if left[1] else (u.source, u.target)
    if a.sector != come:
        raise RewriteError(f"{u.name} does not intertwine {a.sector}")
    return word.replace(i, i + 3, Term.of(App(go, a.region, a.body))), []


@rule("int-rev", "unitary", "form")
def _int_rev(net, word, i, b):
    """The inverse of int: σ_q(t) becomes u π_q(t) u*, or u* form with ``form=star``."""
    a = _app_at(word, i)
    u = net.unitary(_get(b, "unitary"))
    _require_unitary(net, u.name)
    form = b.get("form", "direct")
    if form == "direct":
        if a.sector != u.target:
            raise RewriteError(f"{u.name} does not end at {a.sector}")
        new = (Uni(u.name), App(u.source, a.region, a.body), Star(Uni(u.name)))
    elif form == "star":
        if a.sector != u.source:
            raise RewriteError(f"{u.name} does not start at {a.sector}")
        new = (Star(Uni(u.name)), App(u.target, a.region, a.body), Uni(u.name))
    else:
        raise RewriteError(f"form must be direct or star, got {form!r}")
    return word.replace(i, i + 1, Term(new)), []


@rule("shift", "u")
def _shift(net, word, i, b):
    """Moves an intertwiner across an adjacent application, changing its sector."""
    x, y = _at(word, i), _at(word, i + 1)
    if isinstance(y, App) and is_intertwiner(x):
        name, starred = _intertwiner(x)
        u = net.unitary(name)
        come, go = (u.target, u.source) if starred else (u.source, u.target)
        if y.sector != come:
            raise RewriteError(f"{name} does not intertwine {y.sector}")
        new = (App(go, y.region, y.body), x)
    elif isinstance(x, App) and is_intertwiner(y):
        name, starred = _intertwiner(y)
        u = net.unitary(name)
        come, go = (u.source, u.target) if starred else (u.target, u.source)
        if x.sector != come:
            raise RewriteError(f"{name} does not intertwine {x.sector}")
        new = (y, App(go, x.region, x.body))
    else:
        raise RewriteError(f"factors {i} and {i + 1} are not an intertwiner next to an application")
    if "u" in b and b["u"] != name:
        raise RewriteError(f"expected {b['u']}, found {name}")
    return word.replace(i, i + 2, Term(new)), []


@rule("fold", "composite")
def _fold(net, word, i, b):
    """Replaces a composite's defining word, or its adjoint, by the symbol."""
    c = net.unitary(_get(b, "composite"))
    if c.definition is None:
        raise RewriteError(f"{c.name} is not a composite")
    n = len(c.definition)
    found = _block(word, i, n)
    if found == c.definition:
        new: Atom = Uni(c.name)
    elif found == c.definition.star():
        new = Star(Uni(c.name))
    else:
        raise RewriteError(f"the word at {i} is not the definition of {c.name}")
    return word.replace(i, i + n, Term.of(new)), []


@rule("unfold", "composite")
def _unfold(net, word, i, b):
    """Expands a composite symbol into its defining word."""
    found = _intertwiner(_at(word, i))
    if found is None:
        raise RewriteError(f"factor {i} is not an intertwiner")
    name, starred = found
    if "composite" in b and b["composite"] != name:
        raise RewriteError(f"expected {b['composite']}, found {name}")
    c = net.unitary(name)
    if c.definition is None:
        raise RewriteError(f"{name} is not a composite")
    return word.replace(i, i + 1, c.definition.star() if starred else c.definition), []


# transport between intertwined nets ---------------------------------------------------


@rule("transport")
def _transport(net, word, i, b):
    """π^B_q(t) becomes π^A_{q+k}(t) for t in A(q)."""
    a = _app_at(word, i)
    sector = net.sector(a.sector)
    if sector.transport_of is None:
        raise RewriteError(f"sector {a.sector} is not transported")
    new = App(sector.transport_of, a.region.enlarged(net.transport_steps), a.body)
    return word.replace(i, i + 1, Term.of(new)), membership(net, a.body, a.region)


@rule("transport-back", "sector", "to")
def _transport_back(net, word, i, b):
    """π^A_{q+k}(t) becomes π^B_q(t) for t in A(q)."""
    a = _app_at(word, i)
    sector = net.sector(_get(b, "sector"))
    to = _ref(b, "to")
    if sector.transport_of != a.sector:
        raise RewriteError(f"sector {sector.name} is not transported from {a.sector}")
    if a.region != to.enlarged(net.transport_steps):
        raise RewriteError(f"region {a.region} is not {to} enlarged {net.transport_steps} time(s)")
    return word.replace(i, i + 1, Term.of(App(sector.name, to, a.body))), membership(net, a.body, to)

