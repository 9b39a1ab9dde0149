"""Mutually disjoint zig-zags.

A mutually disjoint zig-zag moves a disjoint pair (x, z) to another
disjoint pair one row at a time. This module holds the row transforms, the
two constructions that move a pair around a triangle of pairwise disjoint
elements, and the theorem that connects any two splittings of an element.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable

from sector_verifier.errors import ConstructionFailed, DegenerateGeometry, PreconditionViolated
from sector_verifier.posets.core import (
    Element,
    MutuallyDisjointZigZag,
    PosetBackend,
    Splitting,
    ZigZag,
    cap_witness,
    check_backend,
    is_disjoint,
    is_q_small,
    validate_mdz,
    validate_splitting,
)
from sector_verifier.posets.finite import FinitePoset, search_mdz
from sector_verifier.zigzag.facts import shrink_against, zz_avoid_third, zz_disjointify
from sector_verifier.zigzag.indicator import ga3_zigzag, small_indicator

logger = logging.getLogger(__name__)

MDZ = MutuallyDisjointZigZag
Pair = tuple[Element, Element]

# Dance patterns by label: each lists the three states visited.
PATTERNS: dict[int, tuple[tuple[str, str], ...]] = {
    1: (("a", "c"), ("a", "b"), ("c", "b")),
    2: (("b", "a"), ("b", "c"), ("a", "c")),
    3: (("a", "b"), ("a", "c"), ("b", "c")),
}


def trivial(x: Element, z: Element) -> MDZ:
    return MDZ.trivial(x, z)


def reverse(m: MDZ) -> MDZ:
    """Runs m backwards. The rows trade places, so (x, z)↭(u, v) becomes (v, u)↭(z, x)."""
    return MDZ.from_rows(m.bottom.sequence()[::-1], m.top.sequence()[::-1])


def swap_rows(m: MDZ) -> MDZ:
    """Reads m with the rows exchanged: (x, z)↭(u, v) becomes (z, x)↭(v, u).

    The bottom row is delayed by one column and the top row padded at the
    end, which keeps every column disjoint.
    """
    top, bottom = m.top.sequence(), m.bottom.sequence()
    return MDZ.from_rows([bottom[0], bottom[0], *bottom], [*top, top[-1], top[-1]])


def true_reverse(m: MDZ) -> MDZ:
    """(x, z)↭(u, v) becomes (u, v)↭(x, z)."""
    return swap_rows(reverse(m))


def concat(first: MDZ, second: MDZ) -> MDZ:
    if first.end != second.start:
        raise ValueError("mutually disjoint zig-zags do not share a state")
    return MDZ.from_rows(
        first.top.sequence() + second.top.sequence()[1:],
        first.bottom.sequence() + second.bottom.sequence()[1:],
    )


def slice_mdz(m: MDZ, i: int, j: int) -> MDZ:
    """The part of m between its states i and j (0-based, i <= j).

    Every intermediate state of a mutually disjoint zig-zag is itself a
    disjoint pair, so any slice is again one.
    """
    if not 0 <= i <= j <= m.n:
        raise ValueError(f"slice {i}..{j} outside 0..{m.n}")
    return MDZ.from_rows(m.top.sequence()[2 * i : 2 * j + 1], m.bottom.sequence()[2 * i : 2 * j + 1])


def orient_start(m: MDZ, start: Pair) -> MDZ:
    """Returns m or its row swap, whichever starts at the ordered pair start."""
    if m.start == tuple(start):
        return m
    if m.start == (start[1], start[0]):
        return swap_rows(m)
    raise ValueError("zig-zag does not start at the requested pair")


def _rows(top: list, bottom: list) -> MDZ:
    return MDZ.from_rows(top, bottom)


@dataclass(frozen=True)
class TriangleDance:
    """Two legs moving a pair through all three pairs of a triangle.

    Attributes:
        legs: The first leg ends where the second starts.
        pattern: Which of ``PATTERNS`` the states realize, once normalized.
    """

    legs: tuple[MDZ, MDZ]
    pattern: int | None = None

    @property
    def states(self) -> tuple[Pair, Pair, Pair]:
        return self.legs[0].start, self.legs[0].end, self.legs[1].end

    def swapped(self) -> "TriangleDance":
        return TriangleDance((swap_rows(self.legs[0]), swap_rows(self.legs[1])), self.pattern)

    def reversed(self) -> "TriangleDance":
        return TriangleDance((true_reverse(self.legs[1]), true_reverse(self.legs[0])), self.pattern)

    def slice(self, start: Pair, end: Iterable[Element]) -> MDZ:
        """The part of the dance from the ordered pair start to the unordered pair end."""
        states = [frozenset(s) for s in self.states]
        i = states.index(frozenset(start))
        j = states.index(frozenset(end))
        if i == j:
            return trivial(*start)
        lo, hi = min(i, j), max(i, j)
        piece = self.legs[lo] if hi - lo == 1 else concat(*self.legs)
        if i > j:
            piece = true_reverse(piece)
        return orient_start(piece, start)


def _label(labels: dict[str, Element], pair: Pair) -> tuple[str, str] | None:
    out = []
    for e in pair:
        name = next((k for k, v in labels.items() if v == e), None)
        if name is None:
            return None
        out.append(name)
    return out[0], out[1]


def normalize(dance: TriangleDance, a: Element, b: Element, c: Element) -> TriangleDance:
    """Transforms dance until its states spell one of the patterns in (a, b, c).

    Raises:
        ConstructionFailed: If no row swap or reversal matches a pattern.
    """
    labels = {"a": a, "b": b, "c": c}
    for variant in (dance, dance.swapped(), dance.reversed(), dance.reversed().swapped()):
        named = tuple(_label(labels, s) for s in variant.states)
        for number, pattern in PATTERNS.items():
            if named == pattern:
                return TriangleDance(variant.legs, number)
    raise ConstructionFailed("dance states match no pattern", [repr(dance.states)])


def _validated(backend: PosetBackend, m: MDZ, p: Element, what: str, trace: list[str]) -> MDZ:
    report = validate_mdz(backend, m, contained_in=p)
    if not report.ok:
        trace.append(f"{what}: {report.summary()}")
        raise ConstructionFailed(f"{what} is not a mutually disjoint zig-zag", trace)
    return m


def _meets(backend: PosetBackend, ys: Iterable[Element], c: Element) -> list[int]:
    return [j for j, y in enumerate(ys) if cap_witness(backend, y, c) is not None]


def _check_triangle(backend: PosetBackend, p: Element, *elements: Element) -> None:
    check_backend(backend, p, *elements)
    for e in elements:
        if not backend.leq(e, p):
            raise PreconditionViolated(f"{backend.describe(e)} is not below {backend.describe(p)}")
    for x, y in itertools.combinations(elements, 2):
        if not is_disjoint(backend, x, y):
            raise PreconditionViolated(f"{backend.describe(x)} and {backend.describe(y)} are not disjoint")


def mdz_through(backend: PosetBackend, a: Element, b: Element, c: Element, zz: ZigZag, p: Element) -> TriangleDance:
    """Moves (a, c) to (a, b) to (c, b) when some link of zz meets c.

    The zig-zag from a to b is made disjoint at its ends, then the first and
    last links meeting c are used to reroute it through c. Each leg keeps one
    element of the pair constant while the other walks a piece of the
    rerouted zig-zag.

    Raises:
        PreconditionViolated: If no link of the disjointified zig-zag meets c.
        ConstructionFailed: If the ends meet c only through the outer links.
    """
    _check_triangle(backend, p, a, b, c)
    trace = ["through c"]
    a_t, b_t, dz = zz_disjointify(backend, zz, a, b)
    hits = _meets(backend, dz.y, c)
    if not hits:
        raise PreconditionViolated("no link of the zig-zag meets the third element")
    j, k = hits[0], hits[-1]
    trace.append(f"first link {j + 1}, last link {k + 1} of {dz.n}")
    c_first = cap_witness(backend, dz.y[j], c)
    c_last = cap_witness(backend, dz.y[k], c)
    seq = dz.sequence()
    to_b = [c_last, *seq[2 * k + 1 :]]
    to_c = [*seq[: 2 * j + 2], c_first]
    leg1 = _rows([a, a, *[a_t] * len(to_b), a, a], [c, c, *to_b, b, b])
    leg2 = _rows([a, a, *to_c, c, c], [b, b, *[b_t] * len(to_c), b, b])
    _validated(backend, leg1, p, "leg (a,c)->(a,b)", trace)
    _validated(backend, leg2, p, "leg (a,b)->(c,b)", trace)
    return TriangleDance((leg1, leg2), 1)


def mdz_around(backend: PosetBackend, a: Element, b: Element, c: Element, zz: ZigZag, p: Element) -> TriangleDance:
    """Moves (a, b) to (c, b) to (c, a), or (a, b) to (a, c) to (b, c), when zz avoids c.

    A second zig-zag from below a to below c is built with links small
    relative to b̃. Its last link meeting ã or b̃ decides the case: meeting ã
    moves the top row first, otherwise the bottom row moves first.

    Raises:
        PreconditionViolated: If a link of the disjointified zig-zag meets c.
        ConstructionFailed: If a step fails or a leg fails validation.
    """
    _check_triangle(backend, p, a, b, c)
    inv = backend.involution
    trace = ["around c"]
    a_t, b_t, dz = zz_disjointify(backend, zz, a, b)
    if _meets(backend, dz.y, c):
        raise PreconditionViolated("a link of the zig-zag meets the third element")
    c_t, _ = zz_avoid_third(backend, dz, c)
    x = ga3_zigzag(backend, small_indicator(backend, a_t, b_t), small_indicator(backend, c_t, b_t), p, b_t)
    ws = x.y
    hits = [i for i, w in enumerate(ws) if any(cap_witness(backend, w, e) is not None for e in (a_t, b_t))]
    if not hits:
        trace.append("no link of the second zig-zag meets either end")
        raise ConstructionFailed("second zig-zag is detached from a and b", trace)
    k = hits[-1]
    tail = x.sequence()[2 * k + 1 :]
    dseq = dz.sequence()
    a_hat = cap_witness(backend, ws[k], a_t)
    if a_hat is not None:
        trace.append(f"case: link {k + 1} meets a")
        b_hat = cap_witness(backend, b_t, inv(ws[k]))
        if b_hat is None and (small := is_q_small(backend, ws[k], b_t)) is not None:
            b_hat = inv(small[1])
        if b_hat is None:
            trace.append("no part of b below the complement of the link")
            raise ConstructionFailed("cannot separate b from the crossing link", trace)
        b_hat = shrink_against(backend, b_hat, ws[k + 1 :])
        leg1 = _rows([a, a, a_hat, *tail, c, c], [b, b, *[b_hat] * (len(tail) + 1), b, b])
        leg2 = _rows([c, c, *[c_t] * len(dseq), c, c], [b, b, *dseq[::-1], a, a])
        labels = "(a,b)->(c,b)", "(c,b)->(c,a)"
    else:
        trace.append(f"case: link {k + 1} meets b only")
        b_hat = cap_witness(backend, ws[k], b_t)
        a_hat = shrink_against(backend, a_t, ws[k:])
        to_c = [b_hat, *tail]
        leg1 = _rows([a, a, *[a_hat] * len(to_c), a, a], [b, b, *to_c, c, c])
        leg2 = _rows([a, a, *dseq, b, b], [c, c, *[c_t] * len(dseq), c, c])
        labels = "(a,b)->(a,c)", "(a,c)->(b,c)"
    _validated(backend, leg1, p, f"leg {labels[0]}", trace)
    _validated(backend, leg2, p, f"leg {labels[1]}", trace)
    logger.debug("mdz_around: %s", "; ".join(trace))
    return TriangleDance((leg1, leg2))


def _search_dance(backend: FinitePoset, a: Element, b: Element, c: Element, p: Element) -> TriangleDance | None:
    labels = {"a": a, "b": b, "c": c}
    for number, pattern in PATTERNS.items():
        states = [(labels[x], labels[z]) for x, z in pattern]
        first = search_mdz(backend, p, states[0], [states[1]])
        second = search_mdz(backend, p, states[1], [states[2]]) if first else None
        if first and second:
            return TriangleDance((first, second), number)
    return None


def triangle_dance(backend: PosetBackend, a: Element, b: Element, c: Element, p: Element) -> TriangleDance:
    """Finds a dance through the three pairs of a, b, c inside p.

    Every labeling of the triangle is tried: a zig-zag between two of the
    elements is built from small indicators relative to the third, and the
    construction is chosen by whether its links meet the third.

    Raises:
        PreconditionViolated: If a, b, c are not pairwise disjoint below p.
        ConstructionFailed: With the trace of every labeling tried.
    """
    _check_triangle(backend, p, a, b, c)
    trace: list[str] = []
    for x, y, z in itertools.permutations((a, b, c)):
        name = "/".join("abc"[(a, b, c).index(e)] for e in (x, y, z))
        try:
            zz = ga3_zigzag(backend, small_indicator(backend, x, z), small_indicator(backend, y, z), p, z)
            _, _, dz = zz_disjointify(backend, zz, x, y)
            if _meets(backend, dz.y, z):
                dance = mdz_through(backend, x, y, z, zz, p)
            else:
                dance = mdz_around(backend, x, y, z, zz, p)
            result = normalize(dance, a, b, c)
            logger.debug("triangle dance via labeling %s: pattern %d", name, result.pattern)
            return result
        except (ConstructionFailed, PreconditionViolated, DegenerateGeometry) as e:
            trace.append(f"{name}: {e}")
            if isinstance(e, ConstructionFailed):
                trace.extend(f"  {t}" for t in e.trace)
    if isinstance(backend, FinitePoset):
        found = _search_dance(backend, a, b, c, p)
        if found is not None:
            return found
        trace.append("exhaustive search: none")
    raise ConstructionFailed("no triangle dance found", trace)


def _grow(backend: PosetBackend, state: Pair, first: Element, second: Element) -> MDZ:
    """One column moving each entry of state up to the target above it."""
    x, z = state
    if backend.leq(x, first) and backend.leq(z, second):
        big_x, big_z = first, second
    elif backend.leq(x, second) and backend.leq(z, first):
        big_x, big_z = second, first
    else:
        raise ConstructionFailed("state is not below the target pair", ["grow"])
    return _rows([x, big_x, big_x], [z, big_z, big_z])


def _between(
    backend: PosetBackend, p: Element, r: Element, s: Element, a: Element, b: Element, trace: list[str]
) -> MDZ:
    """A zig-zag from (r, s) to {a, b}, for one orientation of the two splittings."""
    inv = backend.involution

    def cap(x: Element, y: Element) -> Element | None:
        return cap_witness(backend, x, y)

    ra, sb, rb, sa = cap(r, a), cap(s, b), cap(r, b), cap(s, a)
    if ra is not None and sb is not None:
        trace.append("case 1: both pairs overlap")
        return _rows([r, r, ra, a, a], [s, s, sb, b, b])
    if sb is not None and ra is None:
        if rb is None:
            trace.append("case 2a: only s meets b, r misses b")
            r_hat = cap(r, inv(b))
            rr = cap(r_hat, inv(a)) if r_hat is not None else None
        else:
            trace.append("case 2b: only s meets b, r meets b")
            rr = rb
        if rr is None:
            raise ConstructionFailed("no part of r avoids a", trace)
        first = _rows([r, r, rr], [s, s, sb])
        dance = triangle_dance(backend, a, sb, rr, p)
        mid = dance.slice((rr, sb), (a, sb))
        out = concat(first, mid)
        return concat(out, _grow(backend, out.end, a, b))
    if all(w is None for w in (ra, sb, rb, sa)):
        trace.append("case 3: no overlaps")
        a_hat = cap(inv(r), a)
        b_hat = cap(inv(r), b)
        a_t = cap(a_hat, inv(s)) if a_hat is not None else None
        b_t = cap(b_hat, inv(s)) if b_hat is not None else None
        if a_t is None or b_t is None:
            raise ConstructionFailed("target parts do not avoid r and s", trace)
        first = triangle_dance(backend, r, b_t, s, p).slice((r, s), (r, b_t))
        second = triangle_dance(backend, a_t, b_t, r, p).slice(first.end, (a_t, b_t))
        out = concat(first, second)
        return concat(out, _grow(backend, out.end, a, b))
    raise ConstructionFailed("no case applies to this orientation", trace)


def mdz_between_splittings(backend: PosetBackend, p: Element, s1: Splitting, s2: Splitting) -> tuple[bool, MDZ]:
    """Connects two splittings of p by a mutually disjoint zig-zag inside p.

    Returns:
        (swapped, m) where m runs from (r1, s1) to (r2, s2), or to (s2, r2)
        when swapped is True.

    Raises:
        PreconditionViolated: If either splitting is invalid or not of p.
        ConstructionFailed: With the trace of every orientation tried.
    """
    for sp in (s1, s2):
        check_backend(backend, p, sp.parent, sp.r, sp.s)
        if not backend.equal(sp.parent, p):
            raise PreconditionViolated("splitting of a different element")
        report = validate_splitting(backend, sp)
        if not report.ok:
            raise PreconditionViolated(f"invalid splitting: {report.summary()}")
    start, target = (s1.r, s1.s), (s2.r, s2.s)
    eq = backend.equal
    if eq(s1.r, s2.r) and eq(s1.s, s2.s):
        return False, trivial(*start)
    if eq(s1.r, s2.s) and eq(s1.s, s2.r):
        return True, trivial(*start)
    trace: list[str] = []
    orientations = [((r, s), (a, b), False) for r, s in (start, start[::-1]) for a, b in (target, target[::-1])]
    orientations += [((a, b), (r, s), True) for (r, s), (a, b), _ in orientations]
    for (r, s), (a, b), backwards in orientations:
        trace.append(f"orientation {'backward' if backwards else 'forward'}")
        try:
            m = _between(backend, p, r, s, a, b, trace)
            if backwards:
                m = true_reverse(m)
            m = orient_start(m, start)
            _validated(backend, m, p, "splitting zig-zag", trace)
        except (ConstructionFailed, PreconditionViolated, ValueError) as e:
            trace.append(f"  failed: {e}")
            continue
        if m.end == target:
            return False, m
        if m.end == target[::-1]:
            return True, m
        trace.append("  ended at an unexpected pair")
    if isinstance(backend, FinitePoset):
        m = search_mdz(backend, p, start, [target, target[::-1]])
        if m is not None:
            return m.end != target, m
        trace.append("exhaustive search: none")
    raise ConstructionFailed("no mutually disjoint zig-zag between the splittings", trace)


def swap_mdz(
    backend: PosetBackend,
    p: Element,
    rs: tuple[Element, Element, Element],
    ss: tuple[Element, Element, Element],
) -> MDZ:
    """Exchanges r1 and r2 by passing through a third element r3.

    Each s_k must lie in p, contain the two r's other than r_k and avoid
    r_k. The result has two links and five columns:

        (r1, s2, r3, s1, r2)
        (r2, s3, r1, r1, r1)

    In the first link r1 moves to r3 through s2 while r2 moves to r1
    through s3; in the second r3 moves to r2 through s1.

    Raises:
        PreconditionViolated: If the configuration does not have this shape.
        ConstructionFailed: If the result fails validation.
    """
    check_backend(backend, p, *rs, *ss)
    for k, s in enumerate(ss):
        if not backend.leq(s, p):
            raise PreconditionViolated(f"s{k + 1} is not below {backend.describe(p)}")
        if not is_disjoint(backend, rs[k], s):
            raise PreconditionViolated(f"r{k + 1} meets s{k + 1}")
        for i, r in enumerate(rs):
            if i != k and not backend.leq(r, s):
                raise PreconditionViolated(f"r{i + 1} is not below s{k + 1}")
    r1, r2, r3 = rs
    s1, s2, s3 = ss
    m = _rows([r1, s2, r3, s1, r2], [r2, s3, r1, r1, r1])
    return _validated(backend, m, p, "three-element swap", ["swap"])
