import random

import pytest

from sector_verifier.geometry import CapBackend, ConeBackend, IntervalBackend
from sector_verifier.tools import check_axioms
from sector_verifier.tools.suites import AXIOMS, check_ga5, check_spread, run_batch, suite_for

SIMPLE = ("involution", "GA0", "GA1", "GA1.5", "GA2")


def test_simple_axioms_hold_on_intervals():
    checks = {name: AXIOMS[name] for name in SIMPLE}
    result = run_batch(IntervalBackend(), checks, seed=7, batch=0, count=40)
    for name in SIMPLE:
        assert result[name]["checked"] == 40
        assert result[name]["violations"] == 0, result[name]["counterexamples"]


def test_report_does_not_depend_on_worker_count():
    backend = IntervalBackend()
    one = check_axioms(backend, 150, seed=3, workers=1)
    three = check_axioms(backend, 150, seed=3, workers=3)
    assert one == three
    assert one["samples"] == 150
    assert all(entry["checked"] == 150 for entry in one["axioms"].values())


def test_batches_are_reproducible():
    backend = IntervalBackend()
    checks = {"GA2": AXIOMS["GA2"]}
    assert run_batch(backend, checks, 1, 0, 5) == run_batch(backend, checks, 1, 0, 5)


def test_report_envelope():
    report = check_axioms(IntervalBackend(), 0, seed=7, label="interval")
    assert report["command"] == "check-axioms"
    assert report["status"] == "success"
    assert report["backend"] == "interval"
    assert set(report["axioms"]) == set(AXIOMS)


def test_cones_also_check_the_spread_identity():
    assert "spread" in suite_for(ConeBackend())
    assert "spread" not in suite_for(IntervalBackend())
    report = check_axioms(ConeBackend(), 0, seed=7)
    assert report["axioms"]["spread"]["status"] == "guaranteed"


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_spread_check_passes(seed):
    assert check_spread(ConeBackend(), random.Random(seed)) is None


def test_cap_ga3_and_ga4_are_only_attempted():
    report = check_axioms(CapBackend(), 0, seed=7)
    assert report["axioms"]["GA3"]["status"] == "attempted"
    assert report["axioms"]["GA4"]["status"] == "attempted"
    assert report["axioms"]["GA5"]["status"] == "guaranteed"
    assert report["axioms"]["GA2"]["status"] == "guaranteed"


def test_attempted_failures_do_not_count_as_violations():
    def always_fails(backend, rng):
        return "nope"

    result = run_batch(CapBackend(), {"GA3": always_fails, "GA2": always_fails}, seed=7, batch=0, count=3)
    assert result["GA3"] == {
        "checked": 3,
        "violations": 0,
        "failures": 3,
        "counterexamples": [{"batch": 0, "reason": "nope", "trace": []}] * 3,
    }
    assert result["GA2"]["violations"] == 3


def test_cap_suite_finishes_every_sample():
    report = check_axioms(CapBackend(), 3, seed=7)
    assert all(entry["checked"] == 3 for entry in report["axioms"].values())
    assert report["axioms"]["GA5"]["violations"] == 0
    assert report["axioms"]["GA4"]["violations"] == 0


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_every_sampled_cap_has_a_reflection(seed):
    assert check_ga5(CapBackend(), random.Random(seed)) is None
