from sector_verifier.geometry.cap import Cap, CapBackend, swap_configuration
from sector_verifier.geometry.cone import Cone, ConeBackend, zoom_out_radius
from sector_verifier.geometry.interval import Interval, IntervalBackend
from sector_verifier.geometry.text import format_region, make_backend, parse_region
from sector_verifier.geometry.tolerance import Tolerance

__all__ = [
    "Cap",
    "CapBackend",
    "Cone",
    "ConeBackend",
    "Interval",
    "IntervalBackend",
    "Tolerance",
    "format_region",
    "make_backend",
    "parse_region",
    "swap_configuration",
    "zoom_out_radius",
]
