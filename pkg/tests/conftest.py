from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sector_verifier.geometry import CapBackend, ConeBackend, Interval, IntervalBackend
from sector_verifier.posets.finite import discretized_circle

settings.register_profile("sector_verifier", derandomize=True, max_examples=100)
settings.load_profile("sector_verifier")

# Arcs on a 1-degree grid; a full turn is 2 in π-units.
STEP = Fraction(1, 180)


@st.composite
def intervals(draw, max_length: int = 359) -> Interval:
    start = draw(st.integers(min_value=0, max_value=359))
    length = draw(st.integers(min_value=1, max_value=max_length))
    return Interval(start * STEP, (start + length) * STEP)


@pytest.fixture
def interval_backend() -> IntervalBackend:
    return IntervalBackend()


@pytest.fixture
def cone_backend() -> ConeBackend:
    return ConeBackend()


@pytest.fixture
def cap_backend() -> CapBackend:
    return CapBackend()


@pytest.fixture
def circle4():
    return discretized_circle(4)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch, tmp_path):
    """Keeps every test away from the caller's SECTOR_VERIFIER_* settings and output dir."""
    for name in ("SEED", "EPS", "SAMPLES", "WORKERS", "LOG_LEVEL", "STORE_URL", "OUTPUT_DIR"):
        monkeypatch.delenv(f"SECTOR_VERIFIER_{name}", raising=False)
    monkeypatch.setenv("SECTOR_VERIFIER_OUTPUT_DIR", str(tmp_path / "output"))
