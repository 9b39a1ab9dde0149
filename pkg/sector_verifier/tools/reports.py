"""JSON reports and witness files.

Reports are plain dictionaries with a schema version, the command that
produced them, the seed and a status. They are dumped with sorted keys so
that two runs with the same seed write the same bytes.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import BaseModel

from sector_verifier.errors import ConstructionFailed
from sector_verifier.geometry.text import format_region, parse_region
from sector_verifier.posets.core import (
    MutuallyDisjointZigZag,
    PosetBackend,
    Reflection,
    Splitting,
    ValidationReport,
    ZigZag,
    validate_mdz,
    validate_reflection,
    validate_zigzag,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = "1"


def make_report(command: str, seed: int | None, status: str, **payload: Any) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "seed": seed, "status": status, **payload}


def error_status(error: Exception) -> dict:
    """The ``{"status", "reason", "details"}`` shape for a caught error."""
    result = {"status": "error", "reason": type(error).__name__, "details": str(error)}
    if isinstance(error, ConstructionFailed):
        result["trace"] = list(error.trace)
    return result


def _plain(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump()
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_plain) + "\n"


def write_report(report: dict, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_report(report))
    logger.info("report written to %s", path)
    return path


def read_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())


# witnesses ------------------------------------------------------------------------


def zigzag_payload(backend: PosetBackend, zz: ZigZag) -> dict:
    return {
        "kind": "zigzag",
        "backend": backend.name,
        "z": [format_region(backend, e) for e in zz.z],
        "y": [format_region(backend, e) for e in zz.y],
    }


def mdz_payload(backend: PosetBackend, m: MutuallyDisjointZigZag) -> dict:
    return {
        "kind": "mdz",
        "backend": backend.name,
        "top": zigzag_payload(backend, m.top),
        "bottom": zigzag_payload(backend, m.bottom),
    }


def reflection_payload(backend: PosetBackend, refl: Reflection) -> dict:
    base = refl.base
    names = ("p", "r", "s", "a", "b", "c")
    elements = (base.parent, base.r, base.s, refl.a, refl.b, refl.c)
    return {
        "kind": "reflection",
        "backend": backend.name,
        **{name: format_region(backend, e) for name, e in zip(names, elements)},
    }


def _zigzag(backend: PosetBackend, data: dict) -> ZigZag:
    return ZigZag(
        tuple(parse_region(t, backend) for t in data["z"]),
        tuple(parse_region(t, backend) for t in data["y"]),
    )


def load_witness(backend: PosetBackend, data: dict) -> tuple[Any, ValidationReport]:
    """Parses a witness payload and validates it again.

    Raises:
        ValueError: For an unknown witness kind or an unparsable region.
    """
    kind = data.get("kind")
    if kind == "zigzag":
        zz = _zigzag(backend, data)
        return zz, validate_zigzag(backend, zz)
    if kind == "mdz":
        m = MutuallyDisjointZigZag(_zigzag(backend, data["top"]), _zigzag(backend, data["bottom"]))
        return m, validate_mdz(backend, m)
    if kind == "reflection":
        p, r, s, a, b, c = (parse_region(data[k], backend) for k in ("p", "r", "s", "a", "b", "c"))
        refl = Reflection(Splitting(p, r, s), a, b, c)
        return refl, validate_reflection(backend, refl)
    raise ValueError(f"unknown witness kind {kind!r}")
