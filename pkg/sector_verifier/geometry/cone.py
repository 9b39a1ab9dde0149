"""Open planar cones: an apex and an arc of ray directions.

Sectors wider than a half-turn are handled as the union of two convex
halves split at the bisector; every predicate reduces to half-plane tests.
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sector_verifier.errors import ConstructionFailed, DegenerateGeometry, PreconditionViolated
from sector_verifier.geometry.interval import Interval, IntervalBackend
from sector_verifier.geometry.tolerance import DEFAULT_TOLERANCE, Angle, Tolerance, format_degrees, mod_turn
from sector_verifier.posets.core import PosetBackend, Reflection, Splitting, ZigZag, cap_witness, validate_zigzag

logger = logging.getLogger(__name__)

Vector = tuple

MAX_DOUBLINGS = 80

# exact unit vectors for the quarter turns
_AXES = {Fraction(0): (1, 0), Fraction(1, 2): (0, 1), Fraction(1): (-1, 0), Fraction(3, 2): (0, -1)}


def unit(theta: Angle) -> Vector:
    """Unit vector at angle ``theta`` (π-units), exact on quarter turns."""
    if isinstance(theta, Fraction) and theta in _AXES:
        return _AXES[theta]
    rad = float(theta) * math.pi
    return math.cos(rad), math.sin(rad)


def rational_unit(t: Fraction) -> Vector:
    """The rational point ((1-t²)/(1+t²), 2t/(1+t²)) of the unit circle."""
    t = Fraction(t)
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def angle_of(v: Vector) -> float:
    return mod_turn(math.atan2(float(v[1]), float(v[0])) / math.pi)


def dot(a: Vector, b: Vector):
    return a[0] * b[0] + a[1] * b[1]


def _cw(v: Vector) -> Vector:
    return v[1], -v[0]


def _ccw(v: Vector) -> Vector:
    return -v[1], v[0]


@dataclass(frozen=True)
class Cone:
    """The open sector ``apex + t·d`` for t > 0 and d in ``dir``.

    ``rays`` optionally holds exact unit vectors for the start and end rays;
    without it the rays are computed from ``dir``.
    """

    apex: Vector
    dir: Interval
    rays: tuple[Vector, Vector] | None = None

    @classmethod
    def from_degrees(cls, ax, ay, start, end) -> "Cone":
        return cls((ax, ay), Interval.from_degrees(start, end))

    @classmethod
    def from_rational_rays(cls, apex: Vector, t_start: Fraction, t_end: Fraction) -> "Cone":
        """A cone whose rays are rational points of the circle.

        Such cones keep apex arithmetic exact under ``enlarge``.
        """
        ds, de = rational_unit(t_start), rational_unit(t_end)
        return cls(apex, Interval(angle_of(ds), angle_of(de)), (ds, de))

    @property
    def opening(self) -> Angle:
        return self.dir.length

    def ray_vectors(self) -> tuple[Vector, Vector]:
        if self.rays is not None:
            return self.rays
        return unit(self.dir.start), unit(self.dir.end)

    def normals(self) -> tuple[Vector, Vector]:
        """Outward normals of the start and end boundary rays."""
        ds, de = self.ray_vectors()
        return _cw(ds), _ccw(de)

    def bisector(self) -> Vector:
        return unit(self.dir.mid)

    def __str__(self) -> str:
        ax, ay = self.apex
        return f"cone({_fmt(ax)},{_fmt(ay)},{format_degrees(self.dir.start)},{format_degrees(self.dir.end)})"


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x)


def _norm(v: Vector) -> float:
    return math.hypot(float(v[0]), float(v[1]))


@dataclass(frozen=True)
class _Piece:
    """A convex sector of opening at most a half-turn."""

    apex: Vector
    rays: tuple[Vector, ...]
    normals: tuple[Vector, Vector]


class ConeBackend(PosetBackend):
    """Open cones in the plane ordered by inclusion."""

    name = "cone"

    def __init__(self, tol: Tolerance = DEFAULT_TOLERANCE):
        self.tol = tol
        self.intervals = IntervalBackend(tol)

    def make(self, apex: Vector, dir: Interval) -> Cone:
        cone = Cone(apex, dir)
        self.check(cone)
        return cone

    def check(self, cone: Cone) -> None:
        try:
            self.intervals.check(cone.dir)
        except DegenerateGeometry as e:
            raise DegenerateGeometry(f"{cone}: {e}") from e

    def owns(self, p) -> bool:
        return isinstance(p, Cone)

    def describe(self, p: Cone) -> str:
        return str(p)

    def involution(self, p: Cone) -> Cone:
        rays = (p.rays[1], p.rays[0]) if p.rays is not None else None
        return Cone(p.apex, Interval(p.dir.end, p.dir.start), rays)

    def canonical_interval(self, p: Cone) -> Interval:
        return p.dir

    def _convex(self, p: Cone) -> bool:
        return p.opening <= 1 + self.tol.angle_eps

    def _pieces(self, p: Cone) -> list[_Piece]:
        if self._convex(p):
            ds, de = p.ray_vectors()
            return [_Piece(p.apex, (ds, de, p.bisector()), p.normals())]
        half = p.opening / 2
        first = Cone(p.apex, p.dir.sub(0, half))
        second = Cone(p.apex, p.dir.sub(half, p.opening))
        return self._pieces(first) + self._pieces(second)

    def _projection(self, piece: _Piece, n: Vector) -> tuple[float, float]:
        base = dot(piece.apex, n)
        eps = self.tol.length_eps
        values = [dot(r, n) for r in piece.rays]
        lower = base if all(v >= -eps for v in values) else -math.inf
        upper = base if all(v <= eps for v in values) else math.inf
        return lower, upper

    def _slack(self, *points: Vector) -> float:
        # absolute slack grows with the coordinates being compared
        return self.tol.length_eps * (1 + max(_norm(v) for v in points))

    def _pieces_disjoint(self, a: _Piece, b: _Piece) -> bool:
        eps = self._slack(a.apex, b.apex)
        for n in (*a.normals, *b.normals):
            lo_a, hi_a = self._projection(a, n)
            lo_b, hi_b = self._projection(b, n)
            if hi_a <= lo_b + eps or hi_b <= lo_a + eps:
                return True
        return False

    def disjoint(self, p: Cone, q: Cone) -> bool:
        return all(self._pieces_disjoint(a, b) for a in self._pieces(p) for b in self._pieces(q))

    def apex_in_closure(self, point: Vector, p: Cone) -> bool:
        """Membership of a point in the closure of a convex cone."""
        rel = (point[0] - p.apex[0], point[1] - p.apex[1])
        eps = self._slack(point, p.apex)
        return all(dot(rel, n) <= eps for n in p.normals())

    def leq(self, p: Cone, q: Cone) -> bool:
        if self._convex(q):
            return self.apex_in_closure(p.apex, q) and self.intervals.leq(p.dir, q.dir)
        return self.disjoint(p, self.involution(q))

    def equal(self, p: Cone, q: Cone) -> bool:
        same_apex = _norm((p.apex[0] - q.apex[0], p.apex[1] - q.apex[1])) <= self.tol.length_eps
        return same_apex and self.intervals.equal(p.dir, q.dir)

    def enlarge(self, p: Cone, s) -> Cone:
        """Shifts both boundary lines outward by distance s.

        The new apex is ``apex + s(n_s + n_e)/(1 + n_s·n_e)``; for a
        half-plane this is ``apex + s·n_s``.

        Raises:
            DegenerateGeometry: For opening near zero or a full turn.
        """
        self.check(p)
        if s == 0:
            return p
        ns, ne = p.normals()
        denom = 1 + dot(ns, ne)
        if float(denom) <= 1e-12:
            raise DegenerateGeometry(f"{p} is too wide to enlarge")
        vx = s * (ns[0] + ne[0]) / denom
        vy = s * (ns[1] + ne[1]) / denom
        return Cone((p.apex[0] + vx, p.apex[1] + vy), p.dir, p.rays)

    def _far_cone(self, dir: Interval, scale: float) -> Cone:
        u = unit(dir.mid)
        return Cone((scale * u[0], scale * u[1]), dir)

    def _push_out(self, dir: Interval, start: float, constraints: Sequence, trace: list[str], step: str) -> Cone:
        """Moves a cone with the given directions outward until every constraint holds."""
        t = start
        for _ in range(MAX_DOUBLINGS):
            candidate = self._far_cone(dir, t)
            if all(check(candidate) for check in constraints):
                return candidate
            t *= 2
        trace.append(f"{step}: no apex found along the bisector of {dir}")
        raise ConstructionFailed(f"cone construction failed at {step}", trace)

    def cone_cap_constructor(self, p: Cone, q: Cone, J: Interval, start_scale: float = 1.0) -> Cone:
        """A cone Γ ≤ p, q with I(Γ) = J.

        Raises:
            PreconditionViolated: If J is not inside I(p) ∩ I(q).
        """
        if not (self.intervals.leq(J, p.dir) and self.intervals.leq(J, q.dir)):
            raise PreconditionViolated(f"{J} is not inside the directions of both {p} and {q}")
        start = (1 + max(_norm(p.apex), _norm(q.apex))) * start_scale
        trace = [f"cap of {p} and {q} along {J}"]
        return self._push_out(J, start, [lambda c: self.leq(c, p), lambda c: self.leq(c, q)], trace, "cap")

    def enclosing_cone(self, p: Cone, q: Cone, J: Interval) -> Cone:
        """A cone Σ ≥ p, q whose complement has directions J.

        Raises:
            PreconditionViolated: If J meets I(p) or I(q).
        """
        inner = self.cone_cap_constructor(self.involution(p), self.involution(q), J)
        return self.involution(inner)

    def cap_candidate(self, p: Cone, q: Cone) -> Cone | None:
        parts = self.intervals.intersection_components(p.dir, q.dir)
        if not parts:
            return None
        first = parts[0]
        J = first.sub(first.length / 3, 2 * first.length / 3)
        return self.cone_cap_constructor(p, q, J)

    def split(self, p: Cone) -> tuple[Cone, Cone]:
        third = p.opening / 3
        return Cone(p.apex, p.dir.sub(0, third)), Cone(p.apex, p.dir.sub(2 * third, p.opening))

    def reflection(self, p: Cone) -> Reflection:
        """Cuts p and p' along the line through the apex and the bisector of p.

        c is the half-plane left of that line; r, s, a, b keep the middle
        third of the directions of each of the four wedges it leaves.
        """
        m = p.dir.mid
        back = m + 1

        def wedge(start: Angle, end: Angle) -> Cone:
            arc = Interval(start, end)
            return Cone(p.apex, arc.sub(arc.length / 3, 2 * arc.length / 3))

        base = Splitting(p, wedge(m, p.dir.end), wedge(p.dir.start, m))
        return Reflection(base, wedge(p.dir.end, back), wedge(back, p.dir.start), Cone(p.apex, Interval(m, back)))

    def random_element(self, rng: random.Random) -> Cone:
        apex = (round(rng.uniform(-5, 5), 6), round(rng.uniform(-5, 5), 6))
        start = Fraction(rng.randrange(720), 360)
        length = Fraction(rng.randrange(10, 710), 360)
        return Cone(apex, Interval(start, start + length))

    def random_below(self, p: Cone, rng: random.Random) -> Cone:
        J = self.intervals.random_below(p.dir, rng)
        return self.cone_cap_constructor(p, p, J, start_scale=1 + rng.random())

    def radial_interval(self, p: Cone, r: float) -> Interval:
        """Directions of the arc where the circle of radius r meets p.

        Raises:
            PreconditionViolated: If the apex is not inside the circle.
        """
        ax, ay = float(p.apex[0]), float(p.apex[1])
        if math.hypot(ax, ay) >= r:
            raise PreconditionViolated(f"apex of {p} is outside the circle of radius {r}")
        ends = []
        for d in p.ray_vectors():
            dx, dy = float(d[0]), float(d[1])
            ad = ax * dx + ay * dy
            t = -ad + math.sqrt(ad * ad - (ax * ax + ay * ay) + r * r)
            ends.append(angle_of((ax + t * dx, ay + t * dy)))
        return Interval(*ends)

    def ga3_zigzag(self, pt: Cone, ph: Cone, p: Cone, q: Cone) -> ZigZag:
        """Zig-zag between two q-small q-indicators inside p.

        Builds the interval zig-zag on the directions far from the origin
        and lifts every interval back to a cone whose apex sits far out
        along the interval's bisector.
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
            trace.append("common subcone")
        else:
            zz = self._lifted_zigzag(pt, ph, p, q, trace)
        report = validate_zigzag(self, zz, contained_in=p, ga3_for=q)
        if not report.ok:
            trace.append(f"invalid: {report.summary()}")
            raise ConstructionFailed("cone GA3 zig-zag failed validation", trace)
        return zz

    def _lifted_zigzag(self, pt: Cone, ph: Cone, p: Cone, q: Cone, trace: list[str]) -> ZigZag:
        cones = (pt, ph, p, q)
        radius = 1 + max(_norm(c.apex) for c in cones)
        ends = sorted({float(a) for c in cones for a in (c.dir.start, c.dir.end)})
        gaps = [b - a for a, b in zip(ends, ends[1:] + [ends[0] + 2])]
        eps = min((g for g in gaps if g > self.tol.angle_eps), default=1.0) / 10
        far = zoom_out_radius(radius, eps, cones)
        trace.append(f"step 1: r={radius:.6g} eps={eps:.6g} R={far:.6g}")

        for c in cones:
            radial = self.radial_interval(c, 2 * far)
            if _arc_distance(radial.start, c.dir.start) > eps or _arc_distance(radial.end, c.dir.end) > eps:
                trace.append(f"step 2: radial directions of {c} deviate by more than eps")
                raise ConstructionFailed("cone GA3 failed at step 2", trace)
        inner_t = pt.dir.sub(pt.opening / 3, 2 * pt.opening / 3)
        inner_h = ph.dir.sub(ph.opening / 3, 2 * ph.opening / 3)
        try:
            flat = self.intervals.ga3_zigzag(inner_t, inner_h, p.dir, q.dir)
        except ConstructionFailed as e:
            trace.extend(f"step 2: {line}" for line in e.trace)
            raise ConstructionFailed("cone GA3 failed at step 2", trace) from e
        trace.append(f"step 2: interval zig-zag with {flat.n} link(s)")

        ys = [
            self._push_out(J, far, [lambda c: self.leq(c, p)], trace, "step 3")
            for J in flat.y
        ]
        zs = []
        last = len(flat.z) - 1
        for j, J in enumerate(flat.z):
            side = q if self.intervals.leq(J, q.dir) else self.involution(q)
            bounds = [p, side]
            if j > 0:
                bounds.append(ys[j - 1])
            if j < last:
                bounds.append(ys[j])
            if j == 0:
                bounds.append(pt)
            if j == last:
                bounds.append(ph)
            zs.append(self._push_out(J, far, [lambda c, b=b: self.leq(c, b) for b in bounds], trace, "step 3"))
        trace.append(f"step 3: lifted {len(zs)} indicator(s) and {len(ys)} link(s)")
        return ZigZag((pt, *zs, ph), (pt, *ys, ph))


def _arc_distance(a: Angle, b: Angle) -> float:
    d = float(mod_turn(a - b))
    return min(d, 2 - d)


def zoom_out_radius(r: float, eps: Angle, cones: Sequence[Cone] = ()) -> float:
    """A radius beyond which radial directions stay within eps of the cone directions.

    The deviation of a boundary point at distance R from its ray direction is
    at most asin(|apex| / R), so R = r / sin(eps) suffices when every apex
    lies in the disc of radius r.
    """
    for c in cones:
        if _norm(c.apex) > r:
            raise PreconditionViolated(f"apex of {c} lies outside radius {r}")
    rad = min(float(eps) * math.pi, math.pi / 2)
    if rad <= 0:
        raise PreconditionViolated("eps must be positive")
    return max(r, r / math.sin(rad))
