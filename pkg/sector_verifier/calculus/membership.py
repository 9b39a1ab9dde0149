"""Region membership of terms.

``membership(net, t, m)`` lists the poset facts that place t in the
algebra of region m. A term is well formed when the body of every
application lies in the algebra of its outer region.
"""

import logging

from sector_verifier.calculus.netspec import Fact, NetSpec, leq
from sector_verifier.calculus.terms import App, Atom, Gen, RegionRef, Star, Term, Uni, walk_apps
from sector_verifier.errors import NoCommonRegion, RewriteError

logger = logging.getLogger(__name__)

MEMBER = "member"


def _add(out: list[Fact], facts: list[Fact]) -> None:
    seen = {f.key for f in out}
    for f in facts:
        if f.key not in seen:
            out.append(f)
            seen.add(f.key)


def membership(net: NetSpec, term: Term, m: RegionRef) -> list[Fact]:
    """Facts that together place every factor of term in the algebra of m.

    Raises:
        RewriteError: For an application of an ambient non-identity sector.
        NoCommonRegion: When an intertwiner has no region to live in.
    """
    out: list[Fact] = []
    for atom in term:
        _add(out, atom_membership(net, atom, m))
    return out


def atom_membership(net: NetSpec, atom: Atom, m: RegionRef) -> list[Fact]:
    if isinstance(atom, Star):
        atom = atom.atom
    if isinstance(atom, Gen):
        return [leq(net.generator(atom.name).region, m, MEMBER)]
    if isinstance(atom, Uni):
        return _intertwiner_membership(net, atom.name, m)
    return _app_membership(net, atom, m)


def _intertwiner_membership(net: NetSpec, name: str, m: RegionRef) -> list[Fact]:
    u = net.unitary(name)
    ends = [net.sector(u.source).loc, net.sector(u.target).loc]
    localized = None not in ends
    if net.spread == 0:
        if localized:
            return [leq(e, m, MEMBER) for e in _distinct(ends)]
        if u.region is None:
            raise NoCommonRegion(f"intertwiner {name} has an ambient end and no declared region")
        return [leq(RegionRef.parse(u.region), m, MEMBER)]
    region = net.unitary_region(name)
    facts = [leq(e, region, MEMBER) for e in _distinct(ends)] if localized else []
    return facts + [leq(region.enlarged(), m, MEMBER)]


def _distinct(refs: list[RegionRef]) -> list[RegionRef]:
    return list(dict.fromkeys(refs))


def _app_membership(net: NetSpec, a: App, m: RegionRef) -> list[Fact]:
    sector = net.sector(a.sector)
    if sector.identity:
        return membership(net, a.body, m)
    loc = sector.loc
    if loc is None:
        raise RewriteError(f"sector {a.sector} is not localized")
    landing = a.region.enlarged() if net.spread > 0 else a.region
    # π_q(t) lands in A(q) when π is localized inside q
    inside: list[Fact] = []
    _add(inside, membership(net, a.body, a.region))
    _add(inside, [leq(loc, a.region, MEMBER), leq(landing, m, MEMBER)])
    if all(net.holds(f) for f in inside):
        return inside
    # π_q is the identity on A(q) when q avoids the localization
    try:
        outside = [leq(a.region, loc.flipped(), MEMBER)]
    except RewriteError:
        return inside
    _add(outside, membership(net, a.body, m))
    if all(net.holds(f) for f in outside):
        return outside
    return inside


def wf_facts(net: NetSpec, term: Term) -> list[Fact]:
    """Membership of each application body in its outer region."""
    out: list[Fact] = []
    for a in walk_apps(term):
        net.sector(a.sector)
        _add(out, membership(net, a.body, a.region))
    return out


def ill_formed(net: NetSpec, term: Term) -> Fact | None:
    """The first failing well-formedness fact, or None."""
    return next((f for f in wf_facts(net, term) if not net.holds(f)), None)


def region_of(net: NetSpec, term: Term) -> RegionRef:
    """A smallest declared reference whose algebra contains term.

    Candidates are declared names, plain and inverted, and with spread
    their first two enlargements. Ties are recorded in ``net.notes``.

    Raises:
        NoCommonRegion: If no candidate contains term.
    """
    pluses = (0, 1, 2) if net.spread > 0 else (0,)
    found = []
    for ref in net.refs():
        for k in pluses:
            candidate = ref.enlarged(k) if k else ref
            try:
                facts = membership(net, term, candidate)
                if all(net.holds(f) for f in facts):
                    found.append(candidate)
            except (RewriteError, NoCommonRegion):
                continue
    if not found:
        raise NoCommonRegion(f"no declared region contains {term}")
    return net.minimal(found, f"region of {term}")
