"""Spherical caps on the unit sphere. The complement of a cap is a cap."""

import logging
import math
import random
from dataclasses import dataclass

import numpy as np

from sector_verifier.errors import ConstructionFailed, DegenerateGeometry
from sector_verifier.geometry.tolerance import DEFAULT_TOLERANCE, Tolerance
from sector_verifier.posets.core import PosetBackend, Reflection, Splitting, ZigZag, cap_witness, validate_zigzag

logger = logging.getLogger(__name__)

MAX_GEODESIC_STEPS = 64


@dataclass(frozen=True)
class Cap:
    """Points within angular distance ``radius`` (radians) of ``center``."""

    center: tuple[float, float, float]
    radius: float

    @classmethod
    def at(cls, center, radius: float) -> "Cap":
        v = np.asarray(center, dtype=float)
        n = np.linalg.norm(v)
        if n == 0:
            raise DegenerateGeometry("cap center must be nonzero")
        return cls(tuple(float(c) for c in v / n), float(radius))

    @classmethod
    def from_spherical(cls, colatitude: float, longitude: float, radius: float) -> "Cap":
        """A cap from its center's colatitude and longitude, all in radians."""
        return cls.at(
            (
                math.sin(colatitude) * math.cos(longitude),
                math.sin(colatitude) * math.sin(longitude),
                math.cos(colatitude),
            ),
            radius,
        )

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.center)

    def __str__(self) -> str:
        x, y, z = self.center
        return f"cap({x!r},{y!r},{z!r},{math.degrees(self.radius)!r})"


def angular_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), np.dot(u, v)))


def _tangent_towards(c: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Unit tangent at c pointing along the geodesic to target."""
    t = target - np.dot(c, target) * c
    n = np.linalg.norm(t)
    if n < 1e-12:
        # antipodal or equal: any perpendicular direction
        helper = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        t = np.cross(c, helper)
        n = np.linalg.norm(t)
    return t / n


def _walk(c: np.ndarray, tangent: np.ndarray, angle: float) -> np.ndarray:
    return math.cos(angle) * c + math.sin(angle) * tangent


class CapBackend(PosetBackend):
    """Caps ordered by inclusion, involution (c, ρ) ↦ (−c, π − ρ)."""

    name = "cap"

    def __init__(self, tol: Tolerance = DEFAULT_TOLERANCE):
        self.tol = tol

    def check(self, p: Cap) -> None:
        if not self.tol.eps < p.radius < math.pi - self.tol.eps:
            raise DegenerateGeometry(f"{p} has radius outside (0, π)")

    def owns(self, p) -> bool:
        return isinstance(p, Cap)

    def describe(self, p: Cap) -> str:
        return str(p)

    def involution(self, p: Cap) -> Cap:
        x, y, z = p.center
        return Cap((-x, -y, -z), math.pi - p.radius)

    def distance(self, p: Cap, q: Cap) -> float:
        return angular_distance(p.vector, q.vector)

    def leq(self, p: Cap, q: Cap) -> bool:
        return self.distance(p, q) <= q.radius - p.radius + self.tol.eps

    def disjoint(self, p: Cap, q: Cap) -> bool:
        return self.distance(p, q) >= p.radius + q.radius - self.tol.eps

    def equal(self, p: Cap, q: Cap) -> bool:
        return abs(p.radius - q.radius) <= self.tol.eps and self.distance(p, q) <= self.tol.eps

    def contains_point(self, p: Cap, point) -> bool:
        return angular_distance(p.vector, np.asarray(point, dtype=float)) < p.radius

    def cap_candidate(self, p: Cap, q: Cap) -> Cap | None:
        d = self.distance(p, q)
        width = (p.radius + q.radius - d) / 2
        if width <= self.tol.eps:
            return None
        if self.leq(p, q):
            return p
        if self.leq(q, p):
            return q
        # the lens along the geodesic from p to q spans [d - ρq, ρp]
        offset = (d - q.radius + p.radius) / 2
        c = p.vector
        center = _walk(c, _tangent_towards(c, q.vector), offset)
        return Cap.at(center, width / 2)

    def split(self, p: Cap) -> tuple[Cap, Cap]:
        c = p.vector
        t = _tangent_towards(c, -c)
        return (
            Cap.at(_walk(c, t, p.radius / 2), p.radius / 3),
            Cap.at(_walk(c, -t, p.radius / 2), p.radius / 3),
        )

    def reflection(self, p: Cap) -> Reflection:
        """Cuts p and p' with a great circle through the center of p.

        c is the hemisphere on one side of the circle; each of r, s, a, b
        is a cap inscribed in one of the four lunes it leaves.
        """
        c0 = p.vector
        helper = np.array([1.0, 0.0, 0.0]) if abs(c0[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
        n = _tangent_towards(c0, helper)
        rest = math.pi - p.radius
        r = Cap.at(_walk(c0, n, p.radius / 2), p.radius / 3)
        s = Cap.at(_walk(c0, -n, p.radius / 2), p.radius / 3)
        a = Cap.at(_walk(-c0, n, rest / 2), rest / 3)
        b = Cap.at(_walk(-c0, -n, rest / 2), rest / 3)
        return Reflection(Splitting(p, r, s), a, b, Cap.at(n, math.pi / 2))

    def random_element(self, rng: random.Random) -> Cap:
        v = np.array([rng.gauss(0, 1) for _ in range(3)])
        return Cap.at(v, rng.uniform(0.05, math.pi - 0.05))

    def random_below(self, p: Cap, rng: random.Random) -> Cap:
        radius = p.radius * rng.uniform(0.1, 0.9)
        c = p.vector
        helper = np.array([rng.gauss(0, 1) for _ in range(3)])
        t = _tangent_towards(c, helper)
        return Cap.at(_walk(c, t, rng.uniform(0, p.radius - radius)), radius)

    def ga3_zigzag(self, pt: Cap, ph: Cap, p: Cap, q: Cap) -> ZigZag:
        """Attempts a zig-zag along the geodesic between the two centers.

        Small caps are placed along the geodesic, skipping positions near
        the boundary of q, and consecutive caps are linked by caps covering
        both. Nothing guarantees the links stay inside p, so a failed
        validation is reported rather than treated as an axiom violation.
        """
        trace: list[str] = []
        if self.equal(pt, ph):
            return ZigZag.trivial(pt)
        if self.leq(pt, ph):
            zz = ZigZag((pt, ph), (ph,))
        elif self.leq(ph, pt):
            zz = ZigZag((pt, ph), (pt,))
        elif (r := cap_witness(self, pt, ph)) is not None:
            zz = ZigZag((pt, r, ph), (pt, ph))
        else:
            zz = self._geodesic_zigzag(pt, ph, q, trace)
        report = validate_zigzag(self, zz, contained_in=p, ga3_for=q)
        if not report.ok:
            trace.append(f"invalid: {report.summary()}")
            raise ConstructionFailed("cap GA3 attempt failed validation", trace)
        return zz

    def _geodesic_zigzag(self, pt: Cap, ph: Cap, q: Cap, trace: list[str]) -> ZigZag:
        delta = min(pt.radius, ph.radius) / 4
        a, b = pt.vector, ph.vector
        total = angular_distance(a, b)
        tangent = _tangent_towards(a, b)
        steps = min(MAX_GEODESIC_STEPS, max(1, math.ceil(total / (delta / 2))))
        qc = q.vector
        centers = []
        for k in range(steps + 1):
            c = _walk(a, tangent, total * k / steps)
            near_boundary = abs(angular_distance(c, qc) - q.radius) < 2 * delta
            if k in (0, steps) or not near_boundary:
                centers.append(c)
        zs = [Cap.at(c, delta) for c in centers]
        ys = []
        for u, v in zip(centers, centers[1:]):
            gap = angular_distance(u, v)
            mid = _walk(u, _tangent_towards(u, v), gap / 2)
            ys.append(Cap.at(mid, gap / 2 + delta * 1.01))
        trace.append(f"geodesic path with {len(zs)} indicator caps")
        return ZigZag((pt, *zs, ph), (pt, *ys, ph))


def swap_configuration(radius: float = math.radians(60)) -> tuple[Cap, tuple[Cap, Cap, Cap], tuple[Cap, Cap, Cap]]:
    """Three small caps around the north pole and the caps covering each pair.

    Returns (p, rs, ss) where p is the polar cap of the given radius, the
    r's sit at a third of the way around and half way out, and s_k covers
    the two r's other than r_k while staying clear of r_k. The margins hold
    for radii up to about 90 degrees.
    """
    small = radius / 12
    rs = tuple(Cap.from_spherical(radius / 2, math.radians(90 + 120 * k), small) for k in range(3))
    ss = []
    for k in range(3):
        i, j = (n for n in range(3) if n != k)
        mid = rs[i].vector + rs[j].vector
        half = angular_distance(mid / np.linalg.norm(mid), rs[i].vector)
        ss.append(Cap.at(mid, half + small * 1.4))
    return Cap((0.0, 0.0, 1.0), radius), rs, tuple(ss)
