import pytest

from sector_verifier.calculus import identity_corpus, load_scripts, mutate, run_script, save_scripts
from sector_verifier.errors import MalformedScript, PreconditionViolated


@pytest.fixture(scope="module")
def strict():
    return identity_corpus(0)


@pytest.fixture(scope="module")
def spread():
    return identity_corpus(1)


def test_corpus_sizes(strict, spread):
    assert len(strict) == 20
    assert len(spread) == 4
    names = [script.name for script, _ in strict + spread]
    assert len(names) == len(set(names))


def test_every_identity_is_accepted(strict, spread):
    for script, net in strict + spread:
        verdict = run_script(script, net)
        assert verdict.accepted, (script.name, verdict.reason)


def test_every_mutated_twin_is_rejected(strict, spread):
    for script, net in strict + spread:
        verdict = run_script(mutate(script, net), net)
        assert verdict.status == "rejected", script.name
        assert verdict.reason


def test_spread_nets_use_enlargement(spread):
    assert all(net.spread == 1 for _, net in spread)


def test_negative_spread_is_rejected():
    with pytest.raises(PreconditionViolated):
        identity_corpus(-1)


def test_corpus_files_round_trip(strict, spread, tmp_path):
    pairs = strict + spread
    written = save_scripts(pairs, tmp_path)
    assert len(written) == len(pairs)
    loaded = {script.name: (script, net) for script, net in load_scripts(tmp_path)}
    assert set(loaded) == {script.name for script, _ in pairs}
    for script, net in pairs:
        again, again_net = loaded[script.name]
        assert again == script
        assert again_net.to_file() == net.to_file()
        assert run_script(again, again_net).accepted


def test_load_scripts_needs_the_net_file(strict, tmp_path):
    save_scripts(strict[:1], tmp_path)
    for path in (tmp_path / "nets").iterdir():
        path.unlink()
    with pytest.raises(MalformedScript, match="no net file"):
        load_scripts(tmp_path)


def test_load_scripts_reports_the_file(tmp_path):
    (tmp_path / "broken.script").write_text("script broken\n")
    with pytest.raises(MalformedScript, match="broken.script"):
        load_scripts(tmp_path)
