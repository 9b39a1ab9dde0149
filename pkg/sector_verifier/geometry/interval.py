"""Open arcs on the circle ordered by inclusion, involution = complement."""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from sector_verifier.errors import ConstructionFailed, DegenerateGeometry
from sector_verifier.geometry.tolerance import (
    DEFAULT_TOLERANCE,
    Angle,
    Tolerance,
    degrees,
    format_degrees,
    mod_turn,
)
from sector_verifier.posets.core import PosetBackend, ZigZag, cap_witness, validate_zigzag

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    """The open arc swept counterclockwise from ``start`` to ``end`` (π-units)."""

    start: Angle
    end: Angle

    def __post_init__(self):
        object.__setattr__(self, "start", mod_turn(self.start))
        object.__setattr__(self, "end", mod_turn(self.end))
        if self.start == self.end:
            raise DegenerateGeometry(f"interval with equal endpoints {self.start}")

    @classmethod
    def from_degrees(cls, start, end) -> "Interval":
        return cls(degrees(start), degrees(end))

    @property
    def length(self) -> Angle:
        return mod_turn(self.end - self.start)

    @property
    def mid(self) -> Angle:
        return mod_turn(self.start + self.length / 2)

    def at(self, offset: Angle) -> Angle:
        """The absolute angle ``offset`` counterclockwise from start."""
        return mod_turn(self.start + offset)

    def sub(self, lo: Angle, hi: Angle) -> "Interval":
        """The sub-arc between two offsets from start."""
        return Interval(self.at(lo), self.at(hi))

    def offset_of(self, angle: Angle) -> Angle:
        return mod_turn(angle - self.start)

    def contains_angle(self, angle: Angle, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
        off = self.offset_of(angle)
        return tol.angle_lt(0, off) and tol.angle_lt(off, self.length)

    def __str__(self) -> str:
        return f"interval({format_degrees(self.start)},{format_degrees(self.end)})"


class IntervalBackend(PosetBackend):
    """Open arcs of the circle.

    Every comparison honours the backend tolerance, so arcs that touch at
    a boundary point count as disjoint.
    """

    name = "interval"

    def __init__(self, tol: Tolerance = DEFAULT_TOLERANCE):
        self.tol = tol

    def make(self, start: Angle, end: Angle) -> Interval:
        iv = Interval(start, end)
        self.check(iv)
        return iv

    def check(self, iv: Interval) -> None:
        eps = self.tol.angle_eps
        if iv.length <= eps or iv.length >= 2 - eps:
            raise DegenerateGeometry(f"{iv} has opening within tolerance of 0 or a full turn")

    def owns(self, p) -> bool:
        return isinstance(p, Interval)

    def describe(self, p: Interval) -> str:
        return str(p)

    def involution(self, p: Interval) -> Interval:
        return Interval(p.end, p.start)

    def _offset(self, a: Angle) -> Angle:
        # an offset just below a full turn is the same point as offset 0
        return 0 if a >= 2 - self.tol.angle_eps else a

    def leq(self, p: Interval, q: Interval) -> bool:
        a = self._offset(mod_turn(p.start - q.start))
        return self.tol.angle_le(a + p.length, q.length)

    def equal(self, p: Interval, q: Interval) -> bool:
        return self.tol.angle_eq(p.length, q.length) and self.leq(p, q)

    def intersection_components(self, p: Interval, q: Interval) -> list[Interval]:
        """Components of p ∩ q in counterclockwise order from p.start."""
        a = mod_turn(q.start - p.start)
        lp, lq = p.length, q.length
        pieces = []
        if a + lq > 2:
            pieces.append((0, min(a + lq - 2, lp)))
        if a < lp:
            pieces.append((a, min(a + lq, lp)))
        return [p.sub(lo, hi) for lo, hi in pieces if hi - lo > self.tol.angle_eps]

    def cap_candidate(self, p: Interval, q: Interval) -> Interval | None:
        parts = self.intersection_components(p, q)
        return parts[0] if parts else None

    def split(self, p: Interval) -> tuple[Interval, Interval]:
        third = p.length / 3
        return p.sub(0, third), p.sub(2 * third, p.length)

    def random_element(self, rng: random.Random) -> Interval:
        start = Fraction(rng.randrange(720), 360)
        length = Fraction(rng.randrange(1, 720), 360)
        return Interval(start, start + length)

    def random_below(self, p: Interval, rng: random.Random) -> Interval:
        lo, hi = sorted(rng.sample(range(1001), 2))
        return p.sub(p.length * Fraction(lo, 1000), p.length * Fraction(hi, 1000))

    def hull(self, first: Interval, second: Interval) -> Interval:
        """The arc from first.start counterclockwise to second.end."""
        return Interval(first.start, second.end)

    def ga3_zigzag(self, pt: Interval, ph: Interval, p: Interval, q: Interval) -> ZigZag:
        """Zig-zag of q-indicators over q-small arcs inside p.

        Overlapping or nested ends are joined directly. Otherwise the gap
        between them is bridged by small arcs straddling each boundary point
        of q that lies in the gap.
        """
        trace: list[str] = []
        if self.equal(pt, ph):
            zz = ZigZag.trivial(pt)
            trace.append("equal ends")
        elif self.leq(pt, ph):
            zz = ZigZag((pt, ph), (ph,))
            trace.append("nested ends")
        elif self.leq(ph, pt):
            zz = ZigZag((pt, ph), (pt,))
            trace.append("nested ends")
        elif (r := cap_witness(self, pt, ph)) is not None:
            zz = ZigZag((pt, r, ph), (pt, ph))
            trace.append("overlapping ends")
        else:
            zz = self._bridge(pt, ph, p, q, trace)
        report = validate_zigzag(self, zz, contained_in=p, ga3_for=q)
        if not report.ok:
            trace.append(f"invalid: {report.summary()}")
            raise ConstructionFailed("interval GA3 zig-zag failed validation", trace)
        logger.debug("interval ga3 %s -> %s: %s", pt, ph, trace[-1])
        return zz

    def _bridge(self, pt: Interval, ph: Interval, p: Interval, q: Interval, trace: list[str]) -> ZigZag:
        swapped = p.offset_of(ph.start) < p.offset_of(pt.start)
        first, second = (ph, pt) if swapped else (pt, ph)
        s1 = self._offset(p.offset_of(first.start))
        e1 = s1 + first.length
        s2 = self._offset(p.offset_of(second.start))
        e2 = s2 + second.length
        if s2 < e1 - self.tol.angle_eps:
            trace.append("ends overlap without a common arc")
            raise ConstructionFailed("interval GA3: ends neither disjoint nor overlapping", trace)
        eps = self.tol.angle_eps
        bounds = sorted(
            b
            for b in (p.offset_of(q.start), p.offset_of(q.end))
            if e1 - eps <= b <= s2 + eps
        )
        m1, m2 = (s1 + e1) / 2, (s2 + e2) / 2
        marks = [m1, *bounds, m2]
        gaps = [b - a for a, b in zip(marks, marks[1:])]
        delta = min(
            min(gaps) / 4,
            q.length / 8,
            (2 - q.length) / 8,
            first.length / 4,
            second.length / 4,
        )
        if delta <= eps:
            trace.append("no room between boundary points")
            raise ConstructionFailed("interval GA3: boundary points too close", trace)
        arc = p.sub
        if not bounds:
            c = (e1 + s2) / 2
            mid = arc(c - delta / 2, c + delta / 2)
            z = [first, mid, second]
            y = [arc(s1, max(e1, c + delta / 2)), arc(min(s2, c - delta / 2), e2)]
            trace.append("same side of q")
        else:
            z, y = [first], []
            left_end = s1
            for i, b in enumerate(bounds):
                left, right = arc(b - 2 * delta, b - delta), arc(b + delta, b + 2 * delta)
                hull_end = max(e1, b - delta) if i == 0 else b - delta
                y.append(arc(left_end, hull_end))
                z.append(left)
                y.append(arc(b - 2 * delta, b + 2 * delta))
                z.append(right)
                left_end = b + delta
            y.append(arc(min(s2, left_end), e2))
            z.append(second)
            trace.append(f"bridged {len(bounds)} boundary point(s) of q")
        zz = ZigZag(tuple(z), tuple(y))
        return zz.reversed() if swapped else zz
