import json
from fractions import Fraction

import pytest

from sector_verifier.errors import ConstructionFailed
from sector_verifier.geometry import Interval
from sector_verifier.posets import Splitting, ZigZag
from sector_verifier.tools import (
    SCHEMA_VERSION,
    dump_report,
    error_status,
    load_witness,
    make_report,
    mdz_figure,
    mdz_payload,
    read_report,
    reflection_figure,
    reflection_payload,
    write_report,
    zigzag_figure,
    zigzag_payload,
)
from sector_verifier.zigzag import find_reflection, ga3_zigzag, mdz_between_splittings

arc = Interval.from_degrees
P = arc(0, 180)


@pytest.fixture
def zigzag(interval_backend):
    return ga3_zigzag(interval_backend, arc(10, 20), arc(150, 170), P, arc(45, 135))


@pytest.fixture
def mdz(interval_backend):
    s1 = Splitting(P, arc(0, 60), arc(90, 180))
    s2 = Splitting(P, arc(30, 80), arc(100, 170))
    return mdz_between_splittings(interval_backend, P, s1, s2)[1]


def test_make_report_carries_the_envelope():
    report = make_report("build-zigzag", 7, "success", witness={"kind": "zigzag"})
    assert report == {
        "schema_version": SCHEMA_VERSION,
        "command": "build-zigzag",
        "seed": 7,
        "status": "success",
        "witness": {"kind": "zigzag"},
    }


def test_error_status_shapes():
    assert error_status(ValueError("bad region")) == {
        "status": "error",
        "reason": "ValueError",
        "details": "bad region",
    }
    failed = error_status(ConstructionFailed("no witness", ["case 1", "case 2"]))
    assert failed["reason"] == "ConstructionFailed"
    assert failed["trace"] == ["case 1", "case 2"]


def test_dump_report_is_sorted_and_stable():
    report = make_report("check-axioms", 1, "success", spread=Fraction(1, 2), tags={"b", "a"})
    text = dump_report(report)
    assert text == dump_report(dict(reversed(list(report.items()))))
    data = json.loads(text)
    assert list(data) == sorted(data)
    assert data["spread"] == "1/2"
    assert data["tags"] == ["a", "b"]
    with pytest.raises(TypeError):
        dump_report({"bad": object()})


def test_write_and_read_report(tmp_path):
    report = make_report("export-corpus", None, "success", scripts=["a.script"])
    path = write_report(report, tmp_path / "nested" / "report.json")
    assert read_report(path) == report


def test_zigzag_witness_round_trip(interval_backend, zigzag):
    payload = json.loads(json.dumps(zigzag_payload(interval_backend, zigzag)))
    assert payload["backend"] == "interval"
    again, report = load_witness(interval_backend, payload)
    assert again == zigzag
    assert report.ok


def test_mdz_witness_round_trip(interval_backend, mdz):
    again, report = load_witness(interval_backend, mdz_payload(interval_backend, mdz))
    assert again == mdz
    assert report.ok


def test_reflection_witness_round_trip(interval_backend):
    refl = find_reflection(interval_backend, P)
    again, report = load_witness(interval_backend, reflection_payload(interval_backend, refl))
    assert again == refl
    assert report.ok


def test_load_witness_rejects_unknown_kinds(interval_backend):
    with pytest.raises(ValueError):
        load_witness(interval_backend, {"kind": "spiral"})
    with pytest.raises(ValueError):
        load_witness(interval_backend, {"kind": "zigzag", "z": ["interval(0,"], "y": []})


def test_figures_are_svg(interval_backend, zigzag, mdz, tmp_path):
    refl = find_reflection(interval_backend, P)
    figures = [
        zigzag_figure(interval_backend, zigzag, P),
        mdz_figure(interval_backend, mdz, P),
        reflection_figure(interval_backend, refl),
    ]
    for k, fig in enumerate(figures):
        path = fig.save(tmp_path / "figs" / f"{k}.svg")
        text = path.read_text()
        assert text.startswith("<svg")
        assert "polyline" in text
        assert "<title>" in text


def test_finite_figure_draws_nodes(circle4):
    zz = ZigZag.from_sequence(["a0_1", "a0_2", "a1_1"])
    svg = zigzag_figure(circle4, zz, "a0_3").to_svg()
    assert svg.count("<circle") == 4
    assert ">z2<" in svg
