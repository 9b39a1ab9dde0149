"""SVG figures of regions and witnesses.

Intervals are drawn as arcs of concentric circles, cones as sectors
clipped to a square window, caps as their orthographic projection from
above the north pole and finite-poset nodes as labelled dots on a circle.
Zig-zag links are polylines through one anchor point per region.
"""

import logging
import math
import xml.etree.ElementTree as ET
from pathlib import Path

from sector_verifier.geometry.cap import Cap, CapBackend
from sector_verifier.geometry.cone import Cone, ConeBackend, unit
from sector_verifier.geometry.interval import Interval, IntervalBackend
from sector_verifier.posets.core import Element, MutuallyDisjointZigZag, PosetBackend, Reflection, ZigZag
from sector_verifier.posets.finite import FinitePoset

logger = logging.getLogger(__name__)

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")
CONE_WINDOW = 40.0
ARC_SAMPLES = 48


def _points(points) -> str:
    return " ".join(f"{x:.4f},{-y:.4f}" for x, y in points)


class Figure:
    """Collects shapes in model coordinates and writes one SVG document.

    The y axis points up in model coordinates; it is flipped on output.
    """

    def __init__(self, backend: PosetBackend, title: str = ""):
        self.backend = backend
        self.title = title
        self.min_x = self.min_y = math.inf
        self.max_x = self.max_y = -math.inf
        self.items: list[ET.Element] = []
        self._rings = 0

    def _require(self, points) -> None:
        for x, y in points:
            self.min_x, self.max_x = min(self.min_x, x), max(self.max_x, x)
            self.min_y, self.max_y = min(self.min_y, y), max(self.max_y, y)

    def _shape(self, tag: str, points, color: str, closed: bool, dashed: bool = False) -> None:
        self._require(points)
        style = f"fill:{color if closed else 'none'};fill-opacity:0.15;stroke:{color};stroke-width:0.6"
        if dashed:
            style += ";stroke-dasharray:2,1"
        self.items.append(ET.Element(tag, points=_points(points), style=style))

    def _label(self, point, text: str, color: str) -> None:
        x, y = point
        self._require([point])
        el = ET.Element("text", x=f"{x:.4f}", y=f"{-y:.4f}", style=f"font-size:3px;fill:{color}")
        el.text = text
        self.items.append(el)

    # regions

    def _interval_points(self, iv: Interval, radius: float) -> list[tuple[float, float]]:
        length = float(iv.length)
        out = []
        for k in range(ARC_SAMPLES + 1):
            theta = (float(iv.start) + length * k / ARC_SAMPLES) * math.pi
            out.append((radius * math.cos(theta), radius * math.sin(theta)))
        return out

    def _cone_points(self, cone: Cone) -> list[tuple[float, float]]:
        ax, ay = float(cone.apex[0]), float(cone.apex[1])
        length = float(cone.dir.length)
        out = [(ax, ay)]
        for k in range(ARC_SAMPLES + 1):
            dx, dy = unit(float(cone.dir.start) + length * k / ARC_SAMPLES)
            # farthest point along the ray that stays in the window
            scale = min(
                CONE_WINDOW / abs(dx) if abs(dx) > 1e-12 else math.inf,
                CONE_WINDOW / abs(dy) if abs(dy) > 1e-12 else math.inf,
            )
            out.append((ax + dx * scale, ay + dy * scale))
        return out

    def _cap_points(self, cap: Cap) -> list[tuple[float, float, float]]:
        c = cap.vector
        helper = (1.0, 0.0, 0.0) if abs(c[0]) < 0.9 else (0.0, 1.0, 0.0)
        e1 = _normalized(_cross(c, helper))
        e2 = _cross(c, e1)
        cos_r, sin_r = math.cos(cap.radius), math.sin(cap.radius)
        out = []
        for k in range(ARC_SAMPLES + 1):
            t = 2 * math.pi * k / ARC_SAMPLES
            out.append(tuple(cos_r * c[i] + sin_r * (math.cos(t) * e1[i] + math.sin(t) * e2[i]) for i in range(3)))
        return out

    def region(self, element: Element, color: str, label: str = "") -> tuple[float, float]:
        """Draws one region and returns its anchor point."""
        backend = self.backend
        if isinstance(backend, IntervalBackend):
            self._rings += 1
            radius = 10.0 + 2.5 * self._rings
            points = self._interval_points(element, radius)
            self._shape("polyline", points, color, closed=False)
            anchor = points[len(points) // 2]
        elif isinstance(backend, ConeBackend):
            points = self._cone_points(element)
            self._shape("polygon", points, color, closed=True)
            bx, by = unit(element.dir.mid)
            anchor = (float(element.apex[0]) + 8 * bx, float(element.apex[1]) + 8 * by)
        elif isinstance(backend, CapBackend):
            rim = self._cap_points(element)
            scale = 30.0
            points = [(scale * x, scale * y) for x, y, _ in rim]
            back = sum(1 for *_, z in rim if z < 0) > len(rim) // 2
            self._shape("polygon", points, color, closed=True, dashed=back)
            anchor = (scale * element.center[0], scale * element.center[1])
        elif isinstance(backend, FinitePoset):
            nodes = backend.elements()
            theta = 2 * math.pi * nodes.index(element) / len(nodes)
            anchor = (20 * math.cos(theta), 20 * math.sin(theta))
            self._require([anchor])
            x, y = anchor
            self.items.append(
                ET.Element("circle", cx=f"{x:.4f}", cy=f"{-y:.4f}", r="1.2", style=f"fill:{color}")
            )
            label = label or str(element)
        else:
            raise ValueError(f"cannot draw regions of the {backend.name} backend")
        if label:
            self._label(anchor, label, color)
        return anchor

    def link(self, anchors, color: str) -> None:
        self._shape("polyline", anchors, color, closed=False, dashed=True)

    # output

    def to_svg(self) -> str:
        if not self.items:
            self._require([(-1.0, -1.0), (1.0, 1.0)])
        pad = 0.05 * max(self.max_x - self.min_x, self.max_y - self.min_y, 1.0)
        x0, y0 = self.min_x - pad, -self.max_y - pad
        width = self.max_x - self.min_x + 2 * pad
        height = self.max_y - self.min_y + 2 * pad
        root = ET.Element(
            "svg",
            xmlns="http://www.w3.org/2000/svg",
            version="1.1",
            viewBox=f"{x0:.4f} {y0:.4f} {width:.4f} {height:.4f}",
            width="600",
            height=f"{600 * height / width:.0f}",
        )
        if self.title:
            ET.SubElement(root, "title").text = self.title
        root.extend(self.items)
        ET.indent(root)
        return ET.tostring(root, encoding="unicode") + "\n"

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_svg())
        logger.info("figure written to %s", path)
        return path


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _normalized(v):
    n = math.sqrt(sum(x * x for x in v))
    return tuple(x / n for x in v)


def _row(fig: Figure, zz: ZigZag, color: str, prefix: str) -> None:
    anchors = []
    for j, element in enumerate(zz.sequence()):
        name = f"{prefix}{j // 2 + 1}" if j % 2 == 0 else f"{prefix.upper()}{j // 2 + 1}"
        anchors.append(fig.region(element, color, name))
    fig.link(anchors, color)


def zigzag_figure(backend: PosetBackend, zz: ZigZag, ambient: Element | None = None) -> Figure:
    fig = Figure(backend, f"zig-zag with {zz.n} link(s)")
    if ambient is not None:
        fig.region(ambient, "#999999", "p")
    _row(fig, zz, PALETTE[0], "z")
    return fig


def mdz_figure(backend: PosetBackend, m: MutuallyDisjointZigZag, ambient: Element | None = None) -> Figure:
    fig = Figure(backend, f"mutually disjoint zig-zag with {m.n} link(s)")
    if ambient is not None:
        fig.region(ambient, "#999999", "p")
    _row(fig, m.top, PALETTE[0], "x")
    _row(fig, m.bottom, PALETTE[1], "z")
    return fig


def reflection_figure(backend: PosetBackend, refl: Reflection) -> Figure:
    fig = Figure(backend, "reflection")
    base = refl.base
    parts = (("p", base.parent), ("r", base.r), ("s", base.s), ("a", refl.a), ("b", refl.b), ("c", refl.c))
    for (name, element), color in zip(parts, PALETTE):
        fig.region(element, color, name)
    return fig
