"""Poset-with-involution interface, generic predicates, zig-zag types and validators.

Every operation takes the backend as its first argument. Elements are opaque
hashable values owned by a backend; the generic layer never assumes the
backend is finite.
"""

import logging
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

import networkx as nx
from pydantic import BaseModel, Field

from sector_verifier.errors import BackendMismatch, ConstructionFailed

logger = logging.getLogger(__name__)

Element = Hashable


class PosetBackend(ABC):
    """A poset with an order-reversing involution.

    Subclasses implement the order, the involution and the constructive
    witnesses (caps and splittings). Finite backends additionally set
    ``exhaustive`` and expose ``elements()`` so that generic searches can
    fall back to enumeration.
    """

    name: str = "abstract"
    exhaustive: bool = False

    @abstractmethod
    def leq(self, p: Element, q: Element) -> bool:
        ...

    @abstractmethod
    def involution(self, p: Element) -> Element:
        ...

    @abstractmethod
    def owns(self, p: Any) -> bool:
        """True when ``p`` is an element of this backend."""

    @abstractmethod
    def cap_candidate(self, p: Element, q: Element) -> Element | None:
        """Some common lower bound of p and q, or None if p⋒q is empty."""

    @abstractmethod
    def split(self, p: Element) -> tuple[Element, Element] | None:
        """Two disjoint elements below p."""

    @abstractmethod
    def random_element(self, rng: random.Random) -> Element:
        ...

    def random_below(self, p: Element, rng: random.Random) -> Element:
        """A random element below p. Defaults to p itself."""
        return p

    def equal(self, p: Element, q: Element) -> bool:
        return p == q or (self.leq(p, q) and self.leq(q, p))

    def describe(self, p: Element) -> str:
        return str(p)

    def elements(self) -> Sequence[Element]:
        raise NotImplementedError(f"{self.name} backend is not enumerable")

    def ga3_zigzag(self, pt: Element, ph: Element, p: Element, q: Element) -> "ZigZag":
        raise ConstructionFailed(f"{self.name} backend has no GA3 construction", ["ga3: unsupported"])


def check_backend(backend: PosetBackend, *elements: Element) -> None:
    """Raises BackendMismatch unless every element belongs to backend."""
    for e in elements:
        if not backend.owns(e):
            raise BackendMismatch(f"{e!r} is not an element of the {backend.name} backend")


def is_disjoint(backend: PosetBackend, p: Element, q: Element) -> bool:
    check_backend(backend, p, q)
    return backend.leq(p, backend.involution(q))


def cap_witness(backend: PosetBackend, p: Element, q: Element) -> Element | None:
    """Returns some r ≤ p, q or None when p and q have no common lower bound."""
    check_backend(backend, p, q)
    if backend.leq(p, q):
        return p
    if backend.leq(q, p):
        return q
    r = backend.cap_candidate(p, q)
    if r is not None and not (backend.leq(r, p) and backend.leq(r, q)):
        logger.debug("discarding invalid cap candidate %s", backend.describe(r))
        return None
    return r


def is_q_small(backend: PosetBackend, p: Element, q: Element) -> tuple[Element, Element] | None:
    """Witnesses (r, s) with p, q ≤ r and p, q' ≤ s, or None.

    An upper bound of p and q is the involution of a common lower bound of
    p' and q', so both witnesses come from cap_witness.
    """
    inv = backend.involution
    lower_r = cap_witness(backend, inv(p), inv(q))
    if lower_r is None:
        return None
    lower_s = cap_witness(backend, inv(p), q)
    if lower_s is None:
        return None
    return inv(lower_r), inv(lower_s)


def is_q_indicator(backend: PosetBackend, pt: Element, p: Element, q: Element) -> bool:
    check_backend(backend, pt, p, q)
    return backend.leq(pt, p) and (backend.leq(pt, q) or backend.leq(pt, backend.involution(q)))


@dataclass(frozen=True)
class ZigZag:
    """z_1 ≤ y_1 ≥ z_2 ≤ … ≥ z_{n+1}."""

    z: tuple
    y: tuple

    @classmethod
    def trivial(cls, p: Element) -> "ZigZag":
        return cls((p,), ())

    @classmethod
    def from_sequence(cls, seq: Sequence[Element]) -> "ZigZag":
        """Builds from the interleaved sequence (z_1, y_1, z_2, …, z_{n+1})."""
        if len(seq) % 2 == 0:
            raise ValueError("a zig-zag sequence has odd length")
        return cls(tuple(seq[0::2]), tuple(seq[1::2]))

    @property
    def n(self) -> int:
        return len(self.y)

    @property
    def start(self) -> Element:
        return self.z[0]

    @property
    def end(self) -> Element:
        return self.z[-1]

    def sequence(self) -> list:
        out = [self.z[0]]
        for y, z in zip(self.y, self.z[1:]):
            out.extend((y, z))
        return out

    def reversed(self) -> "ZigZag":
        return ZigZag(tuple(reversed(self.z)), tuple(reversed(self.y)))

    def concat(self, other: "ZigZag") -> "ZigZag":
        """Joins two zig-zags whose end and start coincide."""
        if self.end != other.start:
            raise ValueError("zig-zags do not share an endpoint")
        return ZigZag(self.z + other.z[1:], self.y + other.y)


@dataclass(frozen=True)
class MutuallyDisjointZigZag:
    """Paired zig-zags (x_1, w_1, …, x_{n+1}) over (z_1, y_1, …, z_{n+1})."""

    top: ZigZag
    bottom: ZigZag

    @classmethod
    def from_rows(cls, top: Sequence[Element], bottom: Sequence[Element]) -> "MutuallyDisjointZigZag":
        if len(top) != len(bottom):
            raise ValueError("rows of a mutually disjoint zig-zag have equal length")
        return cls(ZigZag.from_sequence(top), ZigZag.from_sequence(bottom))

    @classmethod
    def trivial(cls, x: Element, z: Element) -> "MutuallyDisjointZigZag":
        return cls(ZigZag.trivial(x), ZigZag.trivial(z))

    @property
    def n(self) -> int:
        return self.top.n

    @property
    def start(self) -> tuple[Element, Element]:
        return self.top.start, self.bottom.start

    @property
    def end(self) -> tuple[Element, Element]:
        return self.top.end, self.bottom.end

    def columns(self) -> list[tuple[Element, Element]]:
        return list(zip(self.top.sequence(), self.bottom.sequence()))


@dataclass(frozen=True)
class Splitting:
    parent: Element
    r: Element
    s: Element


@dataclass(frozen=True)
class Reflection:
    base: Splitting
    a: Element
    b: Element
    c: Element


class Violation(BaseModel):
    """One failed clause of a validator, with 1-based indices."""

    clause: str
    indices: list[int] = Field(default_factory=list)
    elements: list[str] = Field(default_factory=list)
    note: str = ""


class ValidationReport(BaseModel):
    violations: list[Violation] = Field(default_factory=list)
    notes: list[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, clause: str, indices: Iterable[int] = (), elements: Iterable[str] = (), note: str = "") -> None:
        self.violations.append(Violation(clause=clause, indices=list(indices), elements=list(elements), note=note))

    def merge(self, other: "ValidationReport", prefix: str = "") -> None:
        for v in other.violations:
            self.violations.append(v.model_copy(update={"clause": prefix + v.clause}))
        for v in other.notes:
            self.notes.append(v.model_copy(update={"clause": prefix + v.clause}))

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{v.clause}@{v.indices}" for v in self.violations)


def _check_leq(
    backend: PosetBackend, report: ValidationReport, clause: str, index: int, a: Element, b: Element
) -> None:
    if not backend.leq(a, b):
        report.add(clause, [index], [backend.describe(a), backend.describe(b)])
    elif a != b and backend.leq(b, a):
        report.notes.append(
            Violation(
                clause="boundary-equal",
                indices=[index],
                elements=[backend.describe(a), backend.describe(b)],
                note=f"{clause}: distinct representations of the same region",
            )
        )


def validate_zigzag(
    backend: PosetBackend,
    zz: ZigZag,
    contained_in: Element | None = None,
    ga3_for: Element | None = None,
) -> ValidationReport:
    """Lists every violated zig-zag clause.

    Args:
        backend: The poset the elements live in.
        zz: The zig-zag to check.
        contained_in: If given, every entry must lie below this element.
        ga3_for: If given, each z_j must be a q-indicator and each y_j
            q-small for this q.

    Returns:
        A report that is empty exactly when all clauses hold.
    """
    report = ValidationReport()
    if len(zz.z) != len(zz.y) + 1:
        report.add("shape", [], note=f"{len(zz.z)} z-entries for {len(zz.y)} y-entries")
        return report
    for j, y in enumerate(zz.y, start=1):
        _check_leq(backend, report, "z-below-y", j, zz.z[j - 1], y)
        _check_leq(backend, report, "next-z-below-y", j, zz.z[j], y)
    if contained_in is not None:
        for j, z in enumerate(zz.z, start=1):
            if not backend.leq(z, contained_in):
                report.add("contained-z", [j], [backend.describe(z), backend.describe(contained_in)])
        for j, y in enumerate(zz.y, start=1):
            if not backend.leq(y, contained_in):
                report.add("contained-y", [j], [backend.describe(y), backend.describe(contained_in)])
    if ga3_for is not None:
        q_inv = backend.involution(ga3_for)
        for j, z in enumerate(zz.z, start=1):
            if not (backend.leq(z, ga3_for) or backend.leq(z, q_inv)):
                report.add("ga3-indicator", [j], [backend.describe(z), backend.describe(ga3_for)])
        for j, y in enumerate(zz.y, start=1):
            if is_q_small(backend, y, ga3_for) is None:
                report.add("ga3-small", [j], [backend.describe(y), backend.describe(ga3_for)])
    return report


def validate_mdz(
    backend: PosetBackend, m: MutuallyDisjointZigZag, contained_in: Element | None = None
) -> ValidationReport:
    report = ValidationReport()
    report.merge(validate_zigzag(backend, m.top, contained_in=contained_in), "top:")
    report.merge(validate_zigzag(backend, m.bottom, contained_in=contained_in), "bottom:")
    if m.top.n != m.bottom.n:
        report.add("shape", [], note=f"top has {m.top.n} links, bottom has {m.bottom.n}")
        return report
    x, w, z, y = m.top.z, m.top.y, m.bottom.z, m.bottom.y
    if not is_disjoint(backend, x[0], z[0]):
        report.add("start-disjoint", [1], [backend.describe(x[0]), backend.describe(z[0])])
    if not is_disjoint(backend, x[-1], z[-1]):
        report.add("end-disjoint", [m.n + 1], [backend.describe(x[-1]), backend.describe(z[-1])])
    for i in range(m.n):
        if not is_disjoint(backend, w[i], z[i]):
            report.add("w-disjoint-z", [i + 1], [backend.describe(w[i]), backend.describe(z[i])])
        if not is_disjoint(backend, y[i], x[i + 1]):
            report.add("y-disjoint-next-x", [i + 1], [backend.describe(y[i]), backend.describe(x[i + 1])])
    return report


def validate_splitting(backend: PosetBackend, sp: Splitting) -> ValidationReport:
    report = ValidationReport()
    if not backend.leq(sp.r, sp.parent):
        report.add("r-below-parent", [], [backend.describe(sp.r), backend.describe(sp.parent)])
    if not backend.leq(sp.s, sp.parent):
        report.add("s-below-parent", [], [backend.describe(sp.s), backend.describe(sp.parent)])
    if not is_disjoint(backend, sp.r, sp.s):
        report.add("r-disjoint-s", [], [backend.describe(sp.r), backend.describe(sp.s)])
    return report


def validate_reflection(backend: PosetBackend, refl: Reflection) -> ValidationReport:
    report = ValidationReport()
    base = refl.base
    report.merge(validate_splitting(backend, base), "base:")
    report.merge(
        validate_splitting(backend, Splitting(backend.involution(base.parent), refl.a, refl.b)),
        "mirror:",
    )
    c_inv = backend.involution(refl.c)
    for clause, lo, hi in (
        ("a-below-c", refl.a, refl.c),
        ("r-below-c", base.r, refl.c),
        ("b-below-c-inv", refl.b, c_inv),
        ("s-below-c-inv", base.s, c_inv),
    ):
        if not backend.leq(lo, hi):
            report.add(clause, [], [backend.describe(lo), backend.describe(hi)])
    return report


def _split_or_fail(backend: PosetBackend, p: Element, trace: list[str]) -> tuple[Element, Element]:
    parts = backend.split(p)
    if parts is None:
        trace.append(f"split {backend.describe(p)}: none")
        raise ConstructionFailed(f"no splitting of {backend.describe(p)}", trace)
    return parts


def connect(backend: PosetBackend, p: Element, q: Element) -> ZigZag:
    """Builds a zig-zag from p to q.

    Routes through a common lower bound when one exists, otherwise through
    q' and a splitting of q'. Finite backends that lack the witnesses fall
    back to a shortest path in the comparability graph.

    Raises:
        ConstructionFailed: If no route is found or the result fails validation.
    """
    check_backend(backend, p, q)
    inv = backend.involution
    trace: list[str] = []
    if backend.equal(p, q):
        zz = ZigZag.trivial(p)
        trace.append("equal")
    elif backend.leq(p, q):
        zz = ZigZag((p, q), (q,))
        trace.append("p<=q")
    elif backend.leq(q, p):
        zz = ZigZag((p, q), (p,))
        trace.append("q<=p")
    elif (w := cap_witness(backend, p, q)) is not None:
        zz = ZigZag((p, w, q), (p, q))
        trace.append("common lower bound")
    elif backend.equal(q, inv(p)):
        p1, p2 = _split_or_fail(backend, p, trace)
        zz = ZigZag((p, p1, q), (p, inv(p2)))
        trace.append("through a splitting of p")
    elif (w := cap_witness(backend, p, inv(q))) is not None:
        q_inv = inv(q)
        t1, t2 = _split_or_fail(backend, q_inv, trace)
        zz = ZigZag((p, w, q_inv, t1, q), (p, q_inv, q_inv, inv(t2)))
        trace.append("through q' and a splitting of q'")
    elif backend.exhaustive:
        zz = _comparability_path(backend, p, q, trace)
    else:
        trace.append("no cap with q or q'")
        raise ConstructionFailed("GA1 witness missing", trace)
    report = validate_zigzag(backend, zz)
    if not report.ok:
        trace.append(f"invalid: {report.summary()}")
        raise ConstructionFailed("connect produced an invalid zig-zag", trace)
    logger.debug("connect %s -> %s via %s", backend.describe(p), backend.describe(q), trace[-1])
    return zz


def _comparability_path(backend: PosetBackend, p: Element, q: Element, trace: list[str]) -> ZigZag:
    graph = nx.Graph()
    nodes = list(backend.elements())
    graph.add_nodes_from(nodes)
    for a in nodes:
        for b in nodes:
            if a != b and backend.leq(a, b):
                graph.add_edge(a, b)
    try:
        path = nx.shortest_path(graph, p, q)
    except nx.NetworkXNoPath as e:
        trace.append("comparability graph disconnected")
        raise ConstructionFailed("p and q lie in different components", trace) from e
    # each comparable step a-b becomes the link (a, max(a, b), b)
    z, y = [path[0]], []
    for a, b in zip(path, path[1:]):
        y.append(b if backend.leq(a, b) else a)
        z.append(b)
    trace.append(f"comparability path of length {len(path)}")
    return ZigZag(tuple(z), tuple(y))
