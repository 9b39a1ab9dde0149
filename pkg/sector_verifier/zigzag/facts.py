"""Manipulations of zig-zags: shortening, splitting at a third element,
shrinking an element to avoid a zig-zag, and making the ends disjoint from
the interior links.
"""

import logging
from typing import Iterable

from sector_verifier.errors import ConstructionFailed, PreconditionViolated
from sector_verifier.posets.core import (
    Element,
    PosetBackend,
    ValidationReport,
    ZigZag,
    cap_witness,
    check_backend,
    validate_zigzag,
)

logger = logging.getLogger(__name__)


def _first_meeting(backend: PosetBackend, ys: Iterable[Element], c: Element) -> tuple[int, Element] | None:
    """(index, witness) for the first y with a common lower bound with c."""
    for j, y in enumerate(ys):
        w = cap_witness(backend, y, c)
        if w is not None:
            return j, w
    return None


def _checked(backend: PosetBackend, zz: ZigZag, what: str, trace: list[str]) -> ZigZag:
    report = validate_zigzag(backend, zz)
    if not report.ok:
        trace.append(f"invalid: {report.summary()}")
        raise ConstructionFailed(f"{what} produced an invalid zig-zag", trace)
    return zz


def zz_shorten(backend: PosetBackend, zz: ZigZag, b: Element) -> tuple[ZigZag, Element]:
    """Cuts zz at the first link meeting b.

    With j minimal such that y_j ⋒ b is nonempty, returns the zig-zag
    (z_1, y_1, …, y_j, b̂) and b̂ ∈ y_j ⋒ b.

    Raises:
        PreconditionViolated: If no link meets b.
    """
    check_backend(backend, b, *zz.z, *zz.y)
    hit = _first_meeting(backend, zz.y, b)
    if hit is None:
        raise PreconditionViolated(f"no link of the zig-zag meets {backend.describe(b)}")
    j, b_hat = hit
    short = ZigZag(zz.z[: j + 1] + (b_hat,), zz.y[: j + 1])
    return _checked(backend, short, "zz_shorten", [f"cut at link {j + 1}"]), b_hat


def zz_concat_split(backend: PosetBackend, zz: ZigZag, c: Element) -> tuple[ZigZag, ZigZag, Element]:
    """Splits zz into two zig-zags joined at some c̃ ≤ c.

    The first link meeting c is used twice: (z_1, …, y_j, c̃) followed by
    (c̃, y_j, z_{j+1}, …, z_{n+1}).

    Raises:
        PreconditionViolated: If no link meets c.
    """
    check_backend(backend, c, *zz.z, *zz.y)
    hit = _first_meeting(backend, zz.y, c)
    if hit is None:
        raise PreconditionViolated(f"no link of the zig-zag meets {backend.describe(c)}")
    j, c_tilde = hit
    trace = [f"split at link {j + 1}"]
    head = ZigZag(zz.z[: j + 1] + (c_tilde,), zz.y[: j + 1])
    tail = ZigZag((c_tilde,) + zz.z[j + 1 :], zz.y[j:])
    return (
        _checked(backend, head, "zz_concat_split", trace),
        _checked(backend, tail, "zz_concat_split", trace),
        c_tilde,
    )


def shrink_against(backend: PosetBackend, c: Element, ys: Iterable[Element]) -> Element:
    """Shrinks c step by step until it is disjoint from every element of ys.

    Each step replaces c_{j-1} by a common lower bound of c_{j-1} and y_j',
    keeping c_{j-1} when it already lies below y_j'.

    Raises:
        PreconditionViolated: If some y has a common lower bound with c.
        ConstructionFailed: If c_{j-1} has no common lower bound with y_j'.
    """
    current = c
    trace: list[str] = []
    for j, y in enumerate(ys, start=1):
        if cap_witness(backend, y, c) is not None:
            raise PreconditionViolated(f"link {j} meets {backend.describe(c)}")
        y_inv = backend.involution(y)
        if backend.leq(current, y_inv):
            trace.append(f"{j}: kept")
            continue
        nxt = cap_witness(backend, current, y_inv)
        if nxt is None:
            trace.append(f"{j}: no common lower bound with the complement")
            raise ConstructionFailed(f"cannot shrink {backend.describe(c)} away from link {j}", trace)
        trace.append(f"{j}: shrunk")
        current = nxt
    logger.debug("shrink_against: %s", ", ".join(trace) or "nothing to avoid")
    return current


def zz_avoid_third(backend: PosetBackend, zz: ZigZag, c: Element) -> tuple[Element, ValidationReport]:
    """Finds c̃ ≤ c such that the whole zig-zag lies below c̃'.

    Returns:
        c̃ and the report certifying the containment.

    Raises:
        PreconditionViolated: If some y_j meets c.
        ConstructionFailed: If the containment check fails.
    """
    check_backend(backend, c, *zz.z, *zz.y)
    c_tilde = shrink_against(backend, c, zz.y if zz.y else zz.z)
    report = validate_zigzag(backend, zz, contained_in=backend.involution(c_tilde))
    if not report.ok:
        raise ConstructionFailed("zig-zag escapes the complement of the shrunk element", [report.summary()])
    return c_tilde, report


def zz_disjointify(backend: PosetBackend, zz: ZigZag, a: Element, b: Element) -> tuple[Element, Element, ZigZag]:
    """Replaces the ends so that interior links avoid them.

    Starting from a zig-zag from below a to below b, returns ã ≤ a, b̃ ≤ b
    and a zig-zag (ã, y_1, …, y_n, b̃) with y_j ≤ b̃' for j < n and
    y_j ≤ ã' for j > 1.

    Raises:
        PreconditionViolated: If the ends of zz are not below a and b.
        ConstructionFailed: If shrinking or validation fails.
    """
    check_backend(backend, a, b)
    if not (backend.leq(zz.start, a) and backend.leq(zz.end, b)):
        raise PreconditionViolated("zig-zag ends are not below the given elements")
    trace: list[str] = []
    short, b_hat = zz_shorten(backend, zz, b)
    trace.append(f"b side: {short.n} link(s)")
    back, a_hat = zz_shorten(backend, short.reversed(), a)
    core = back.reversed()
    trace.append(f"a side: {core.n} link(s)")
    ys = core.y
    b_tilde = shrink_against(backend, b_hat, ys[:-1])
    a_tilde = shrink_against(backend, a_hat, ys[1:])
    out = ZigZag((a_tilde,) + core.z[1:-1] + (b_tilde,), ys)
    _checked(backend, out, "zz_disjointify", trace)
    inv = backend.involution
    for j, y in enumerate(ys, start=1):
        if j < len(ys) and not backend.leq(y, inv(b_tilde)):
            trace.append(f"link {j} meets the b end")
            raise ConstructionFailed("disjointified zig-zag still meets b", trace)
        if j > 1 and not backend.leq(y, inv(a_tilde)):
            trace.append(f"link {j} meets the a end")
            raise ConstructionFailed("disjointified zig-zag still meets a", trace)
    logger.debug("zz_disjointify: %s", "; ".join(trace))
    return a_tilde, b_tilde, out
