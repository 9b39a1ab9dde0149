"""Small indicators and GA3 zig-zags."""

import logging

from sector_verifier.errors import ConstructionFailed, PreconditionViolated
from sector_verifier.posets.core import (
    Element,
    PosetBackend,
    ZigZag,
    cap_witness,
    check_backend,
    is_q_indicator,
    is_q_small,
)
from sector_verifier.posets.finite import FinitePoset, brute_small_indicators

logger = logging.getLogger(__name__)


def is_small_indicator(backend: PosetBackend, pt: Element, p: Element, q: Element) -> bool:
    return is_q_indicator(backend, pt, p, q) and is_q_small(backend, pt, q) is not None


def small_indicator(backend: PosetBackend, p: Element, q: Element) -> Element:
    """Returns a q-small q-indicator below p.

    Takes a common lower bound of p with q (or with q') and keeps the first
    half of its splitting; the other half certifies smallness.

    Raises:
        ConstructionFailed: If neither cap exists or no part is q-small.
    """
    check_backend(backend, p, q)
    trace: list[str] = []
    for label, side in (("q", q), ("q'", backend.involution(q))):
        w = cap_witness(backend, p, side)
        if w is None:
            trace.append(f"no cap with {label}")
            continue
        parts = backend.split(w)
        if parts is None:
            trace.append(f"cap with {label} has no splitting")
            continue
        for part in parts:
            if is_small_indicator(backend, part, p, q):
                return part
        trace.append(f"split of cap with {label} is not {label}-small")
    if isinstance(backend, FinitePoset):
        found = brute_small_indicators(backend, p, q)
        if found:
            trace.append("exhaustive search")
            return found[0]
        trace.append("exhaustive search: none")
    raise ConstructionFailed(
        f"no q-small q-indicator below {backend.describe(p)} for {backend.describe(q)}", trace
    )


def is_ga15_witness(backend: PosetBackend, pt: Element, p: Element, q: Element) -> bool:
    """True when pt is a q-small q-indicator that also witnesses GA1 for (p, q)."""
    if not is_small_indicator(backend, pt, p, q):
        return False
    return cap_witness(backend, p, q) is not None or cap_witness(backend, p, backend.involution(q)) is not None


def ga3_zigzag(backend: PosetBackend, pt: Element, ph: Element, p: Element, q: Element) -> ZigZag:
    """A zig-zag from pt to ph inside p whose z's are q-indicators and y's q-small.

    Raises:
        PreconditionViolated: If pt or ph is not a q-small q-indicator below p.
        ConstructionFailed: If the backend construction fails.
    """
    check_backend(backend, pt, ph, p, q)
    for label, end in (("start", pt), ("end", ph)):
        if not is_small_indicator(backend, end, p, q):
            raise PreconditionViolated(f"{label} {backend.describe(end)} is not a q-small q-indicator below p")
    zz = backend.ga3_zigzag(pt, ph, p, q)
    logger.debug("ga3 zig-zag with %d link(s) on %s", zz.n, backend.name)
    return zz
