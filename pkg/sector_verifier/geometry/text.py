"""Structured-text regions and backend selection.

Regions are written ``interval(start,end)``, ``cone(ax,ay,start,end)``,
``cap(x,y,z,rho)`` and ``node(name)``; angles are in degrees.
"""

import math
import re
from fractions import Fraction

from sector_verifier.errors import ConfigError, DegenerateGeometry, RegionSyntaxError
from sector_verifier.geometry.cap import Cap, CapBackend
from sector_verifier.geometry.cone import Cone, ConeBackend
from sector_verifier.geometry.interval import Interval, IntervalBackend
from sector_verifier.geometry.tolerance import Tolerance, degrees
from sector_verifier.posets.core import PosetBackend
from sector_verifier.posets.finite import FinitePoset, load_finite_poset

_REGION = re.compile(r"^\s*(interval|cone|cap|node)\s*\((.*)\)\s*$")

BACKEND_NAMES = ("interval", "cone", "cap", "finite:<file>")


def make_backend(name: str, tol: Tolerance | None = None) -> PosetBackend:
    """Builds the backend named on the command line.

    Raises:
        ConfigError: For an unknown backend name.
        InvalidPoset: When a finite poset file fails validation.
    """
    tol = tol or Tolerance()
    if name == "interval":
        return IntervalBackend(tol)
    if name == "cone":
        return ConeBackend(tol)
    if name == "cap":
        return CapBackend(tol)
    if name.startswith("finite:"):
        return load_finite_poset(name.removeprefix("finite:"))
    raise ConfigError(f"unknown backend {name!r}; expected one of {', '.join(BACKEND_NAMES)}")


def _number(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def parse_region(text: str, backend: PosetBackend):
    """Parses one region and checks it belongs to backend.

    Raises:
        RegionSyntaxError: On syntax errors or a form that does not match backend.
        DegenerateGeometry: For zero-width or full-turn regions.
    """
    m = _REGION.match(text)
    if not m:
        raise RegionSyntaxError(f"cannot parse region {text!r}")
    kind, body = m.group(1), m.group(2)
    args = [a.strip() for a in body.split(",")] if body.strip() else []
    try:
        if kind == "interval" and isinstance(backend, IntervalBackend) and len(args) == 2:
            region = Interval(degrees(args[0]), degrees(args[1]))
            backend.check(region)
            return region
        if kind == "cone" and isinstance(backend, ConeBackend) and len(args) == 4:
            region = Cone((_number(args[0]), _number(args[1])), Interval(degrees(args[2]), degrees(args[3])))
            backend.check(region)
            return region
        if kind == "cap" and isinstance(backend, CapBackend) and len(args) == 4:
            x, y, z, rho = (float(a) for a in args)
            region = Cap.at((x, y, z), math.radians(rho))
            backend.check(region)
            return region
    except DegenerateGeometry:
        raise
    except (ValueError, ZeroDivisionError) as e:
        raise RegionSyntaxError(f"bad number in {text!r}") from e
    if kind == "node" and isinstance(backend, FinitePoset) and len(args) == 1:
        if not backend.owns(args[0]):
            raise RegionSyntaxError(f"{args[0]!r} is not a node of {backend.name}")
        return args[0]
    raise RegionSyntaxError(f"{text!r} is not a region of the {backend.name} backend")


def format_region(backend: PosetBackend, region) -> str:
    if isinstance(backend, FinitePoset):
        return f"node({region})"
    return backend.describe(region)
