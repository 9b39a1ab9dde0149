"""Builders for the fusion and braiding terms.

Both builders check their geometric preconditions on the resolved regions
before producing a term, so a corpus script can never start from a term
whose defining choices are invalid.
"""

import logging

from sector_verifier.calculus.netspec import NetSpec
from sector_verifier.calculus.terms import App, RegionRef, Star, Term, Uni
from sector_verifier.errors import PreconditionViolated
from sector_verifier.posets.core import Splitting, is_q_indicator, validate_splitting
from sector_verifier.zigzag.indicator import is_small_indicator

logger = logging.getLogger(__name__)


def _outer(net: NetSpec, name: str) -> RegionRef:
    ref = RegionRef(name)
    return ref.enlarged() if net.spread > 0 else ref


def _check_unit(net: NetSpec, name: str, target: str, localization: str) -> str:
    """The source sector of an intertwiner name: source → target localized in localization."""
    u = net.unitary(name)
    if u.target != target:
        raise PreconditionViolated(f"{name} ends at {u.target}, not {target}")
    source = net.sector(u.source)
    if not source.identity and source.localization != localization:
        raise PreconditionViolated(f"{name} starts at {source.name}, which is not localized in {localization}")
    return source.name


def fusion_term(
    net: NetSpec,
    pi: str,
    sigma: str,
    p: str,
    q: str,
    pt: str,
    units: tuple[str | None, str | None],
    x: Term,
) -> Term:
    """The fusion (π ∘_p σ)_q applied to x.

    With charge transporters u: π̃ → π and v: σ̃ → σ moving both sectors to
    the indicator pt, the term is ``u π̃_p(v) π̃_q(σ̃_q(x)) π̃_p(v)* u*``.
    Without spread, when p lies inside q or inside q' the simpler
    ``π_q(σ_q(x))`` is returned. A ``None`` transporter stands for the
    identity and leaves its factors out; the applications around v keep
    an empty body.

    Raises:
        PreconditionViolated: If pt is not a suitable indicator or the
            transporters do not match the sectors.
    """
    backend = net.backend
    resolved = {name: net.resolve(RegionRef(name)) for name in (p, q, pt)}
    if net.spread == 0:
        if not is_small_indicator(backend, resolved[pt], resolved[p], resolved[q]):
            raise PreconditionViolated(f"{pt} is not a {q}-small {q}-indicator below {p}")
        inv_q = backend.involution(resolved[q])
        if backend.leq(resolved[p], resolved[q]) or backend.leq(resolved[p], inv_q):
            logger.debug("fusion at %s collapses: %s lies on one side of %s", q, p, q)
            return Term.of(App(pi, RegionRef(q), Term.of(App(sigma, RegionRef(q), x))))
    else:
        grown = net.enlarge(resolved[pt], 2)
        if not is_q_indicator(backend, grown, resolved[p], resolved[q]):
            raise PreconditionViolated(f"{pt} enlarged twice is not a {q}-indicator below {p}")
    u, v = units
    pi_t = _check_unit(net, u, pi, pt) if u is not None else pi
    sigma_t = _check_unit(net, v, sigma, pt) if v is not None else sigma
    outer_p, outer_q = _outer(net, p), _outer(net, q)
    body = Term.of(App(pi_t, outer_q, Term.of(App(sigma_t, RegionRef(q), x))))
    dressing = Term.of(Uni(v)) if v is not None else Term()
    term = Term.of(App(pi_t, outer_p, dressing)) + body + Term.of(App(pi_t, outer_p, dressing.star()))
    if u is not None:
        term = Term.of(Uni(u)) + term + Term.of(Star(Uni(u)))
    return term


def braiding_term(
    net: NetSpec,
    pi: str,
    sigma: str,
    p: str,
    splitting: tuple[str, str],
    units: tuple[str, str] | None = None,
    reverse: bool = False,
) -> Term:
    """The braiding of π and σ at p for the splitting (r, s).

    With u: π̃ → π localized in r and v: σ̃ → σ localized in s this is
    ``v σ̃_p(u) u* π_p(v*)``; ``reverse`` gives ``u π̃_p(v) v* σ_p(u*)``.
    Without transporters both sectors already sit in the splitting and
    the braiding is the product of two empty applications.

    Raises:
        PreconditionViolated: If (r, s) does not split p, or with spread
            r enlarged once still meets s.
    """
    r, s = splitting
    backend = net.backend
    elements = [net.resolve(RegionRef(name)) for name in (p, r, s)]
    report = validate_splitting(backend, Splitting(*elements))
    if not report.ok:
        raise PreconditionViolated(f"({r}, {s}) does not split {p}: {report.summary()}")
    if net.spread > 0 and not backend.leq(net.enlarge(elements[1]), backend.involution(elements[2])):
        raise PreconditionViolated(f"{r} enlarged once meets {s}")
    outer = _outer(net, p)
    if units is None:
        pair = (App(sigma, outer, Term()), App(pi, outer, Term()))
        return Term(pair[::-1] if reverse else pair)
    u, v = units
    pi_r = _check_unit(net, u, pi, r)
    sigma_s = _check_unit(net, v, sigma, s)
    if reverse:
        return Term.of(
            Uni(u), App(pi_r, outer, Term.of(Uni(v))), Star(Uni(v)), App(sigma, outer, Term.of(Star(Uni(u))))
        )
    return Term.of(Uni(v), App(sigma_s, outer, Term.of(Uni(u))), Star(Uni(u)), App(pi, outer, Term.of(Star(Uni(v)))))
