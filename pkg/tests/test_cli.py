import json

import pytest

from deszeta.cli import main
from deszeta.harness import RunConfig, random_word_pairs, run_suite

REPORT_KEYS = {"schema", "suite", "cases", "summary", "wall_time"}
CASE_KEYS = {"id", "inputs", "expected", "actual", "abs_err", "verdict", "route", "equality_level"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_positive(capsys):
    code, out, _ = run(capsys, "eval", "-k", "1,1", "--prec", "128")
    assert code == 0
    value = float(out.splitlines()[0].split("=")[1])
    assert abs(value - 0.5) < 1e-10
    assert "route: extrapolation-A" in out


def test_eval_exact(capsys):
    code, out, _ = run(capsys, "eval", "-k", "0", "--exact")
    assert code == 0
    assert out.splitlines()[0] == "zeta_des(0) = -1/2"


def test_eval_exact_negative_indices(capsys):
    code, out, _ = run(capsys, "eval", "-k", "-1,-2", "--exact", "--format", "json")
    assert code == 0
    case = json.loads(out)["cases"][0]
    assert case["expected"] == case["actual"] == "-1/60"
    assert case["equality_level"] == "exact"


@pytest.mark.parametrize("argv", [
    ["eval", "-k", "1,x"],
    ["eval", "-k", "1", "--exact"],
    ["eval"],
    ["eval", "-k", "1,1", "--route", "B"],
    ["verify", "--suite", "nope"],
    ["shuffle", "[1", "[1]"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


@pytest.mark.parametrize("u, v, expansion, identity", [
    ("[1]", "[1]", "2*[1,1]", "zeta_des(1)*zeta_des(1) = 2*zeta_des(1,1)"),
    ("[-1]", "[1]", "[-1,1] - [0,0]", "zeta_des(-1)*zeta_des(1) = zeta_des(1,-1) - zeta_des(0,0)"),
    ("[0]", "[0]", "[0,0]", "zeta_des(0)*zeta_des(0) = zeta_des(0,0)"),
])
def test_shuffle(capsys, u, v, expansion, identity):
    code, out, _ = run(capsys, "shuffle", u, v, "--format", "json")
    assert code == 0
    case = json.loads(out)["cases"][0]
    assert case["actual"] == expansion
    assert case["inputs"]["identity"] == identity
    assert case["abs_err"] <= 1e-9


def test_verify_report_shape(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "exact-values")
    assert code == 0
    rep = json.loads(out)
    assert set(rep) == REPORT_KEYS
    assert rep["schema"] == 1
    assert rep["summary"]["fail"] == 0
    assert all(set(c) == CASE_KEYS for c in rep["cases"])
    ids = [c["id"] for c in rep["cases"]]
    assert ids == sorted(ids)


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lemma-limit", "--tol", "1e-12")
    assert code == 1
    assert json.loads(out)["summary"]["fail"] > 0


def _strip_time(text):
    rep = json.loads(text)
    rep.pop("wall_time")
    return rep


def test_verify_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--suite", "pochhammer", "--seed", "7")
    _, b, _ = run(capsys, "verify", "--suite", "pochhammer", "--seed", "7", "--jobs", "2")
    _, c, _ = run(capsys, "verify", "--suite", "pochhammer", "--seed", "8")
    assert _strip_time(a) == _strip_time(b)
    assert _strip_time(a) != _strip_time(c)


def test_formats(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "lemma-limit", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0].startswith("id,inputs,expected")
    assert len(lines) == 3
    _, out, _ = run(capsys, "verify", "--suite", "lemma-limit", "--format", "text")
    assert "lemma-limit: 2 passed, 0 failed" in out


def test_out_path(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "cross-route", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["suite"] == "cross-route"


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bits": 96, "format": "json"}))
    _, out, _ = run(capsys, "eval", "-k", "2", "--config", str(cfg))
    assert json.loads(out)["cases"][0]["inputs"]["bits"] == 96
    _, out, _ = run(capsys, "eval", "-k", "2", "--config", str(cfg), "--prec", "128")
    assert json.loads(out)["cases"][0]["inputs"]["bits"] == 128
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    code, _, _ = run(capsys, "eval", "-k", "2", "--config", str(bad))
    assert code == 2


def test_env_precision(capsys, monkeypatch):
    monkeypatch.setenv("DESZETA_PREC", "100")
    _, out, _ = run(capsys, "eval", "-k", "3", "--format", "json")
    assert json.loads(out)["cases"][0]["inputs"]["bits"] == 100


def test_run_config_override():
    cfg = RunConfig(tols={"a": 1.0}).override(bits=128, tols={"b": 2.0}, seed=None)
    assert cfg.bits == 128 and cfg.tols == {"a": 1.0, "b": 2.0} and cfg.seed == 42


def test_word_pairs_are_seeded():
    assert random_word_pairs(3) == random_word_pairs(3)
    assert random_word_pairs(3) != random_word_pairs(4)
    for u, v in random_word_pairs(3):
        assert 1 <= len(u) <= 2 and max(map(abs, u + v)) <= 3


def test_run_suite_by_name():
    rep = run_suite("pochhammer", RunConfig())
    assert rep.ok and len(rep.cases) == 200
    with pytest.raises(KeyError):
        run_suite("nope", RunConfig())
