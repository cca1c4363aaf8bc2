import json
import math

import pytest

from mrlab.cli import main, read_config, ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("mu,expected", [("0.5", math.pi), ("0.25", math.pi * math.sqrt(2))])
def test_certify_power(capsys, mu, expected):
    code, out, _ = run(capsys, "certify-weight", "--family", "power", "--mu", mu)
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == "mrlab/1"
    assert rep["constant"] == pytest.approx(expected, rel=1e-2)


def test_certify_constant_diverges(capsys):
    code, out, _ = run(capsys, "certify-weight", "--family", "const")
    rep = json.loads(out)
    assert rep["reports"]["P_L1"]["verdict"] == "diverging"
    assert rep["reports"]["P_L1"]["constant"] == "inf"


def test_kp_heat(capsys):
    code, out, _ = run(capsys, "mr-test", "kp", "--model", "heat1d", "--certificate", "gaussian")
    rep = json.loads(out)
    assert code == 0
    assert rep["growth"]["tag"] == "log"
    assert rep["growth"]["slope"] == pytest.approx(4 * math.exp(-0.5), rel=2e-2)


def test_weighted_exp(capsys):
    code, out, _ = run(capsys, "mr-test", "weighted", "--weight", "exp", "--model", "diag:1,2,4")
    rep = json.loads(out)
    assert rep["constant"] <= 0.8 + 1e-4


def test_besov_compare(capsys):
    code, out, _ = run(capsys, "besov", "--theta", "0.5", "--compare", "thermic")
    rep = json.loads(out)
    lo, hi = rep["ratio_bracket"]
    assert 0 < lo <= hi


@pytest.mark.parametrize("argv", [
    ("certify-weight", "--family", "power", "--mu", "0.25"),
    ("mr-test", "resolvent", "--model", "diag:1,3"),
    ("kfunctional", "--model", "diag:1", "--source", "modulus"),
    ("solve", "--model", "diag:1,2", "--steps", "50"),
])
def test_byte_identical_reports(capsys, argv):
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert first.endswith("\n")


def test_out_dir(tmp_path, capsys):
    code, out, _ = run(capsys, "certify-weight", "--mu", "0.5", "--out", str(tmp_path))
    files = list(tmp_path.glob("*.json"))
    assert code == 0 and len(files) == 1
    assert json.loads(files[0].read_text())["command"] == "certify-weight"


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# powers\nfamily = power\nmu = 0.25\nnodes = 2048\n")
    _, from_file, _ = run(capsys, "certify-weight", "--config", str(cfg))
    assert json.loads(from_file)["quadrature"]["n_nodes"] == 2048
    assert json.loads(from_file)["constant"] == pytest.approx(math.pi * math.sqrt(2), rel=1e-2)
    _, overridden, _ = run(capsys, "certify-weight", "--config", str(cfg), "--mu", "0.5")
    assert json.loads(overridden)["constant"] == pytest.approx(math.pi, rel=1e-2)


def test_config_rejects_unknown_keys(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config(cfg)


@pytest.mark.parametrize("argv", [
    ("mr-test", "kp", "--model", "diag:0,1"),
    ("mr-test", "kp", "--model", "heat3d"),
    ("certify-weight", "--mu", "abc"),
    ("certify-weight", "--t-min", "-1"),
    ("mr-test", "kp", "--model", "diag:1", "--certificate", "basis:4"),
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_unknown_choice_exits(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["certify-weight", "--family", "nope"])
    assert exc.value.code == 2


@pytest.mark.parametrize("preset", ["powers", "exp-weight", "resolvent"])
def test_reproduce_presets_pass(tmp_path, capsys, preset):
    code, out, _ = run(capsys, "reproduce", preset, "--out", str(tmp_path))
    assert code == 0
    lines = out.strip().splitlines()
    assert lines and all(ln.startswith("PASS") for ln in lines)
    claims = [json.loads(p.read_text()) for p in (tmp_path / preset).glob("*.json")]
    assert len(claims) == len(lines)
    assert all({"expected", "computed", "rel_error", "pass"} <= set(c) for c in claims)


def test_reproduce_failure_sets_exit_code(tmp_path, capsys, monkeypatch):
    from mrlab import cli

    def failing(args):
        return [cli._claim("always-off", 1.0, 2.0, 0.01)]

    monkeypatch.setitem(cli.PRESETS, "powers", failing)
    code, out, _ = run(capsys, "reproduce", "powers", "--out", str(tmp_path))
    assert code == 1
    assert out.startswith("FAIL")
    claim = json.loads((tmp_path / "powers" / "always-off.json").read_text())
    assert claim["pass"] is False
    assert claim["rel_error"] == pytest.approx(1.0)
