"""Reflections: splittings of p mirrored into p' through a common element."""

import logging

from sector_verifier.errors import ConstructionFailed, PreconditionViolated
from sector_verifier.posets.core import (
    Element,
    PosetBackend,
    Reflection,
    Splitting,
    cap_witness,
    check_backend,
    is_q_small,
    validate_reflection,
)
from sector_verifier.posets.finite import FinitePoset
from sector_verifier.zigzag.indicator import ga3_zigzag, small_indicator

logger = logging.getLogger(__name__)


def _walk_across(backend: PosetBackend, p: Element, trace: list[str]) -> Reflection:
    inv = backend.involution
    parts = backend.split(p)
    if parts is None:
        trace.append("no splitting of p")
        raise ConstructionFailed("p has no splitting", trace)
    r0, s0 = parts
    start = small_indicator(backend, r0, p)
    goal = small_indicator(backend, inv(p), p)
    zz = ga3_zigzag(backend, start, goal, inv(s0), p)
    trace.append(f"zig-zag with {zz.n} link(s) inside the complement of s")
    for j, y in enumerate(zz.y):
        here, there = zz.z[j], zz.z[j + 1]
        if backend.leq(here, p) and backend.leq(there, inv(p)):
            trace.append(f"crosses from p to p' at link {j + 1}")
            small = is_q_small(backend, y, p)
            if small is None:
                trace.append("crossing link is not small")
                raise ConstructionFailed("crossing link has no upper bound with p", trace)
            return Reflection(Splitting(p, here, s0), there, inv(small[0]), y)
    trace.append("zig-zag never crosses")
    raise ConstructionFailed("zig-zag stays on one side of p", trace)


def search_reflection(poset: FinitePoset, p: str) -> Reflection | None:
    """Enumerates every c and picks maximal parts of its four overlaps with p and p'."""
    pi = poset.involution(p)
    for c in poset.nodes:
        ci = poset.involution(c)
        r, s = cap_witness(poset, p, c), cap_witness(poset, p, ci)
        a, b = cap_witness(poset, pi, c), cap_witness(poset, pi, ci)
        if None in (r, s, a, b):
            continue
        refl = Reflection(Splitting(p, r, s), a, b, c)
        if validate_reflection(poset, refl).ok:
            return refl
    return None


def find_reflection(backend: PosetBackend, p: Element) -> Reflection:
    """Finds a splitting (r, s) of p and (a, b) of p' with r, a ≤ c and s, b ≤ c'.

    A zig-zag runs from a small indicator in p to one in p' while avoiding
    one half of a splitting of p; its first link straddling from p to p'
    supplies c. Backends with a direct construction (caps) use it first.

    Raises:
        ConstructionFailed: If no reflection is found.
    """
    check_backend(backend, p)
    trace: list[str] = []
    direct = getattr(backend, "reflection", None)
    if direct is not None:
        refl = direct(p)
        report = validate_reflection(backend, refl)
        if report.ok:
            return refl
        trace.append(f"{backend.name} reflection invalid: {report.summary()}")
    try:
        refl = _walk_across(backend, p, trace)
        report = validate_reflection(backend, refl)
        if report.ok:
            return refl
        trace.append(f"invalid: {report.summary()}")
    except (ConstructionFailed, PreconditionViolated) as e:
        trace.append(str(e))
        if isinstance(e, ConstructionFailed):
            trace.extend(e.trace)
    if isinstance(backend, FinitePoset):
        found = search_reflection(backend, p)
        if found is not None:
            logger.debug("reflection of %s found by enumeration", p)
            return found
        trace.append("exhaustive search: none")
    raise ConstructionFailed(f"no reflection of {backend.describe(p)}", trace)
