import json

import pytest

from main import COMMANDS, EXIT_OK, EXIT_USAGE, main
from sector_verifier.geometry import IntervalBackend
from sector_verifier.memory import RunStore
from sector_verifier.tools import load_witness, read_report

ZIGZAG_ARGS = ["interval(10,20)", "interval(150,170)", "interval(0,180)", "interval(45,135)"]


@pytest.fixture
def out(tmp_path):
    return tmp_path / "report.json"


def test_build_zigzag(out, tmp_path):
    svg = tmp_path / "zz.svg"
    assert main(["build-zigzag", *ZIGZAG_ARGS, "--out", str(out), "--svg", str(svg)]) == EXIT_OK
    report = read_report(out)
    assert report["status"] == "success"
    assert report["schema_version"] == "1"
    zz, check = load_witness(IntervalBackend(), report["witness"])
    assert check.ok and zz.n == 5
    assert svg.read_text().startswith("<svg")


def test_build_zigzag_rejects_bad_ends(out):
    args = ["interval(80,100)", "interval(10,20)", "interval(0,180)", "interval(90,270)"]
    assert main(["build-zigzag", *args, "--out", str(out)]) == EXIT_USAGE
    assert not out.exists()


def test_build_mdz(out):
    args = ["interval(0,180)", "interval(0,60)", "interval(90,180)", "interval(100,170)", "interval(30,80)"]
    assert main(["build-mdz", *args, "--out", str(out)]) == EXIT_OK
    report = read_report(out)
    assert report["swapped"] is True
    assert report["witness"]["kind"] == "mdz"


def test_find_reflection_writes_to_the_output_dir(tmp_path):
    assert main(["find-reflection", "interval(0,180)"]) == EXIT_OK
    report = read_report(tmp_path / "output" / "find-reflection.json")
    assert report["command"] == "find-reflection"
    assert report["seed"] == 7


def test_finite_regions_need_a_backend(out, tmp_path):
    poset = tmp_path / "pair.poset"
    poset.write_text("nodes a a'\ninvolution a a'\n")
    assert main(["find-reflection", "node(a)", "--out", str(out)]) == EXIT_USAGE
    code = main(["find-reflection", "node(a)", "--backend", f"finite:{poset}", "--out", str(out)])
    report = read_report(out)
    assert code == 1
    assert report["status"] == "violations"
    assert report["error"]["reason"] == "ConstructionFailed"


@pytest.mark.parametrize(
    "argv",
    [
        ["check-axioms", "--backend", "torus"],
        ["check-axioms", "--backend", "interval", "--workers", "0"],
        ["check-axioms", "--backend", "interval", "--eps", "0"],
        ["find-reflection", "interval(0,"],
        ["find-reflection", "interval(10,10)"],
        ["verify-identities", "--corpus", "does-not-exist"],
    ],
)
def test_usage_errors_exit_2(argv, out):
    assert main([*argv, "--out", str(out)]) == EXIT_USAGE


def test_internal_value_errors_are_not_usage_errors(monkeypatch, out):
    def broken(args, settings):
        raise ValueError("internal")

    monkeypatch.setitem(COMMANDS, "find-reflection", broken)
    with pytest.raises(ValueError, match="internal"):
        main(["find-reflection", "interval(0,180)", "--out", str(out)])


def test_malformed_net_file_exits_2(tmp_path, out):
    corpus = tmp_path / "corpus"
    assert main(["export-corpus", str(corpus), "--out", str(tmp_path / "export.json")]) == EXIT_OK
    for net in (corpus / "nets").glob("*.json"):
        net.write_text('{"name": 1}')
    assert main(["verify-identities", "--corpus", str(corpus), "--out", str(out)]) == EXIT_USAGE


def test_check_axioms_report(out):
    code = main(["check-axioms", "--backend", "interval", "--samples", "5", "--seed", "11", "--out", str(out)])
    report = read_report(out)
    assert report["seed"] == 11
    assert report["samples"] == 5
    assert code == (EXIT_OK if report["status"] == "success" else 1)


def test_empty_corpus_directory(out, tmp_path):
    corpus = tmp_path / "empty"
    corpus.mkdir()
    assert main(["verify-identities", "--corpus", str(corpus), "--out", str(out)]) == EXIT_OK
    assert read_report(out)["details"] == "0 scripts"


def test_export_then_verify(tmp_path, out):
    corpus = tmp_path / "corpus"
    assert main(["export-corpus", str(corpus), "--mutated", "--out", str(tmp_path / "export.json")]) == EXIT_OK
    exported = read_report(tmp_path / "export.json")
    assert len(exported["scripts"]) == 24
    assert len(exported["mutated"]) == 24

    assert main(["verify-identities", "--corpus", str(corpus), "--out", str(out)]) == EXIT_OK
    report = read_report(out)
    assert report["accepted"] == 24 and report["rejected"] == 0

    mutated = str(corpus / "mutated")
    assert main(["verify-identities", "--corpus", mutated, "--out", str(out)]) == 1
    assert main(["verify-identities", "--corpus", mutated, "--expect", "rejected", "--out", str(out)]) == EXIT_OK
    assert read_report(out)["rejected"] == 24


def test_runs_are_recorded_in_the_store(tmp_path, out):
    url = f"sqlite:///{tmp_path}/runs.db"
    assert main(["find-reflection", "interval(0,180)", "--store", url, "--out", str(out)]) == EXIT_OK
    store = RunStore(url).connect()
    try:
        [run] = store.list_runs("find-reflection")
        assert run["status"] == "success"
        assert store.get_run(run["run_id"])["report"] == json.loads(out.read_text())
    finally:
        store.close()
