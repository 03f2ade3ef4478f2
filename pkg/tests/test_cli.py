import csv
import io
import json
import math

import pytest

from wavepacket import cli

FAST = {
    "packet": ["packet", "--gamma", "1", "--p0", "2", "--n", "401"],
    "step": ["step", "--k", "1", "--v0", "1.5"],
    "barrier": ["barrier", "--energy", "1", "--v0", "1", "--a", "2"],
    "sweep-cliff": ["sweep-cliff", "--n-ratios", "4"],
    "sweep-well": ["sweep-well", "--n-widths", "3", "--v0-over-e0", "1"],
    "mfp": ["mfp"],
    "transform": ["transform", "--op", "potential-rel", "--p0", "1", "--mass", "1", "--v0", "0.5"],
    "correlate": ["correlate", "--mode", "collision", "--dim", "1", "--n-delta", "9"],
}


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_step_output(capsys):
    code, out, _ = run(FAST["step"], capsys)
    assert code == 0
    (row,) = rows(out)
    assert float(row["b_minus_re"]) == pytest.approx(-1 / 3, abs=1e-12)
    assert float(row["c_plus_re"]) == pytest.approx(2 / 3, abs=1e-12)


def test_mfp_si(capsys):
    code, out, _ = run(["mfp", "--format", "json"], capsys)
    assert code == 0
    env = json.loads(out)
    assert set(env) == {"version", "config", "data", "diagnostics"}
    ru = [r for r in env["data"] if r["process"] == "rutherford"][0]
    assert ru["l_m"] == pytest.approx(5.771078e-3, rel=1e-6)


@pytest.mark.parametrize("name", sorted(FAST))
def test_threads_do_not_change_output(name, capsys):
    outputs = []
    for threads in ("1", "8"):
        for fmt in ("csv", "json"):
            code, out, err = run(FAST[name] + ["--threads", threads, "--format", fmt], capsys)
            assert code == 0, err
            outputs.append(out + err)
    assert outputs[0] == outputs[2]
    assert outputs[1] == outputs[3]


def test_config_precedence(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[step]\nk = 2.0  # wavenumber\nv0 = 0.0\n")
    _, out, _ = run(["step", "--config", str(cfg)], capsys)
    assert float(rows(out)[0]["k"]) == 2.0
    _, out, _ = run(["step", "--config", str(cfg), "--k", "3"], capsys)
    assert float(rows(out)[0]["k"]) == 3.0
    monkeypatch.setenv(cli.CONFIG_ENV, str(cfg))
    _, out, _ = run(["step"], capsys)
    assert float(rows(out)[0]["k"]) == 2.0


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[sweep-cliff]\ngama = 1\n")
    code, _, err = run(["sweep-cliff", "--config", str(cfg)], capsys)
    assert code == 2
    assert "gama" in err


@pytest.mark.parametrize("argv", [
    ["step", "--k", "-1"],
    ["packet", "--order", "9"],
    ["sweep-cliff", "--mode", "fixed"],
    ["sweep-cliff", "--ratio-min", "5", "--ratio-max", "1"],
    ["transform", "--op", "boost", "--beta", "1.0"],
    ["transform", "--op", "interface", "--kind", "light_absorbing", "--mass", "0"],
    ["mfp", "--T", "0.1"],
    ["step", "--units", "imperial"],
    ["nosuch"],
])
def test_invalid_input_exit_code(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_domain_error_exit_code(capsys):
    code, _, err = run(["transform", "--op", "potential-nonrel", "--p0", "1", "--mass", "1", "--v0", "-1"], capsys)
    assert code == 2
    assert "forbidden" in err


def test_numerical_failure_envelope(capsys):
    # interior wavenumber exactly zero: singular matching system
    code, out, err = run(["barrier", "--energy", "0.5", "--v0", "-0.5", "--a", "1"], capsys)
    assert code == 3
    assert out == ""
    env = json.loads(err)
    assert env["data"] is None
    assert env["diagnostics"]["error_type"] == "NumericalError"


def test_nan_handling(capsys):
    code, out, _ = run(["sweep-well", "--n-widths", "2", "--v0-over-e0", "1"], capsys)
    assert code == 0
    assert rows(out)[0]["product_reflected"] == "nan"
    code, out, _ = run(["sweep-well", "--n-widths", "2", "--v0-over-e0", "1", "--format", "json"], capsys)
    assert json.loads(out)["data"][0]["product_reflected"] is None


def test_correlate_summary_sidecar(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, stdout, _ = run(FAST["correlate"] + ["--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    summary = json.loads((tmp_path / "c.csv.summary.json").read_text())
    w = summary["diagnostics"]["fitted_width"]
    assert w == pytest.approx(math.sqrt(2), rel=1e-3)
    assert summary["config"]["eps_e"] == "inf"


def test_si_sweep_defaults():
    cfg = cli.parse_config(["sweep-well", "--units", "si"])
    assert cfg.params["delta_x1"] == 8e-10
    assert cfg.params["mass"] == pytest.approx(9.109384e-31)
    assert "threads" not in cfg.echo()


def test_version(capsys):
    assert run(["--version"], capsys)[0] == 0


def test_negative_gamma_named(capsys):
    code, _, err = run(["packet", "--gamma", "-1"], capsys)
    assert code == 2
    assert "gamma" in err


def test_packet_config_resolved():
    cfg = cli.parse_config(["packet", "--gamma", "1", "--p0", "0"])
    assert (cfg.subcommand, cfg.units) == ("packet", "natural")
    assert cfg.params["mass"] == 1.0


def test_sweep_schema(capsys):
    code, out, _ = run(["sweep-cliff", "--n-ratios", "3", "--format", "json"], capsys)
    env = json.loads(out)
    assert list(env["data"][0]) == ["v0_over_e0", "product_reflected", "product_transmitted"]
    assert "refinement_delta_product" in env["diagnostics"]
