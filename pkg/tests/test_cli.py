import csv
import io
import math
from pathlib import Path

import pytest

from spinphase import cli
from spinphase.errors import ConfigError

RECIPES = Path(__file__).resolve().parents[1] / "scripts" / "recipes"


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize("text, expected", [
    ("pi", math.pi),
    ("pi/3", math.pi / 3),
    ("3pi/4", 3 * math.pi / 4),
    ("2*pi", 2 * math.pi),
    ("-pi/2", -math.pi / 2),
    ("0.25", 0.25),
    ("1/3", 1 / 3),
    ("1e-3", 1e-3),
    ("3/pi", 3 / math.pi),
])
def test_parse_number(text, expected):
    assert cli.parse_number(text) == expected


@pytest.mark.parametrize("text", ["", "pie", "1/0", "x"])
def test_parse_number_rejects(text):
    with pytest.raises(ConfigError):
        cli.parse_number(text)


def test_parse_state_and_sweep():
    spec = cli.parse_state("0:0, pi/2:pi, 1")
    assert spec.sites == ((0.0, 0.0), (math.pi / 2, math.pi), (1.0, 0.0))
    sweep = cli.parse_sweep("theta2:0:pi:5", "q_avg, aa_beta")
    assert sweep.target == ("theta", 1)
    assert sweep.quantities == ("q_avg", "aa_beta")
    with pytest.raises(ConfigError):
        cli.parse_sweep("theta2:0:pi", "q_avg")


def test_read_config(tmp_path):
    cfg = tmp_path / "r.cfg"
    cfg.write_text("# comment\nn = 2\nb = 3  # trailing\nperiodic = yes\nstate = 0:0,0:0\n")
    assert cli.read_config(cfg) == {"n": 2, "b": 3.0, "periodic": True, "state": "0:0,0:0"}
    cfg.write_text("colour = red\n")
    with pytest.raises(ConfigError):
        cli.read_config(cfg)


def _two_spin_args(*extra):
    return ["run", "--n", "2", "--j", "1", "--b", "3", "--state", "0:0,0:0", *extra]


def test_run_ms_sweep(capsys):
    code, out, err = run(_two_spin_args("--mode", "ms", "--t", "pi/3", "--sweep", "theta2:0:pi:5",
                                        "--quantities", "ms_total,ms_dynamic,q_instant"), capsys)
    assert code == 0 and err == ""
    rows = rows_of(out)
    assert list(rows[0]) == ["theta2", "ms_total", "ms_dynamic", "q_instant", "flag"]
    assert len(rows) == 5
    assert float(rows[-1]["theta2"]) == math.pi
    assert float(rows[0]["ms_dynamic"]) == pytest.approx(-7 * math.pi / 3)


def test_two_point_sweep(capsys):
    code, out, _ = run(_two_spin_args("--sweep", "theta2:0:pi:2", "--quantities", "aa_beta"), capsys)
    assert code == 0
    rows = rows_of(out)
    assert [float(r["theta2"]) for r in rows] == [0.0, math.pi]
    assert list(rows[0]) == ["theta2", "aa_beta", "tau", "cyclic", "flag"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, out, _ = run(_two_spin_args("--sweep", "theta2:0:pi:3", "--quantities", "aa_beta_i",
                                      "--output", str(target)), capsys)
    assert code == 0 and out == ""
    assert len(rows_of(target.read_text())) == 3


def test_flags_override_recipe(capsys):
    code, out, _ = run(["run", "--config", str(RECIPES / "three_spin_aa.cfg"),
                        "--sweep", "theta3:0:pi:3"], capsys)
    assert code == 0
    assert len(rows_of(out)) == 3


@pytest.mark.parametrize("extra", [
    ("--mode", "xx", "--sweep", "theta2:0:pi:3", "--quantities", "aa_beta"),
    ("--sweep", "theta2:0:pi:1", "--quantities", "aa_beta"),
    ("--sweep", "theta5:0:pi:3", "--quantities", "aa_beta"),
    ("--sweep", "theta2:0:pi:3", "--quantities", "nonsense"),
    ("--sweep", "theta2:0:pi:3", "--quantities", "ms_gamma"),
    ("--sweep", "t:0:1:3", "--quantities", "aa_beta"),
])
def test_config_errors_exit_1(extra, capsys):
    code, out, err = run(_two_spin_args(*extra), capsys)
    assert code == cli.EXIT_CONFIG
    assert out == "" and "config error" in err


def test_missing_setting_exit_1(capsys):
    code, _, err = run(["run", "--n", "2"], capsys)
    assert code == cli.EXIT_CONFIG and "missing" in err


def test_incommensurate_exit_2(capsys):
    state = ",".join(["0:0"] * 4 + ["1:0"])
    code, out, err = run(["run", "--n", "5", "--b", "3", "--state", state,
                          "--sweep", "theta5:0.5:1:2", "--quantities", "aa_beta"], capsys)
    assert code == cli.EXIT_PHYSICS and out == ""
    assert "IncommensurateSpectrum" in err


def test_no_return_exit_2(capsys):
    state = ",".join(["0:0"] * 4 + ["1:0"])
    code, _, err = run(["run", "--n", "5", "--b", "3", "--state", state, "--quasi", "true",
                        "--t-max", "0.5", "--grid-points", "500",
                        "--sweep", "theta5:0.5:1:2", "--quantities", "aa_beta"], capsys)
    assert code == cli.EXIT_PHYSICS and "NoReturnFound" in err


def test_orthogonal_points_are_flagged(capsys):
    code, out, _ = run(["run", "--n", "3", "--b", "3", "--state", "0:0,pi/2:0,0:0", "--mode", "ms",
                        "--t", "pi/2", "--sweep", "theta3:0:pi:3",
                        "--quantities", "ms_gamma,ms_gamma_int"], capsys)
    assert code == 0
    rows = rows_of(out)
    # the middle spin is flipped by the field at B t = 3 pi / 2
    assert rows[0]["flag"] == "orthogonal:site2" and rows[0]["ms_gamma_int"] == ""
    assert rows[0]["ms_gamma"] != ""
    # the composite overlap vanishes at theta3 = pi/2 and pi
    for r in rows[1:]:
        assert r["flag"] == "orthogonal:composite" and r["ms_gamma"] == ""


def test_runs_are_deterministic(capsys):
    argv = _two_spin_args("--sweep", "theta2:0:pi:7", "--quantities", "aa_beta_i,q_avg")
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second


def test_fit_scale_on_two_spin_sweep(tmp_path, capsys):
    target = tmp_path / "two.csv"
    run(["run", "--n", "2", "--b", "3", "--state", "pi/2:pi/2,0:0", "--sweep", "theta2:0.1:3:30",
         "--quantities", "aa_beta_i,q_avg", "--output", str(target)], capsys)
    code, out, _ = run(["fit-scale", str(target), "aa_beta_i^2", "q_avg"], capsys)
    assert code == 0
    k, rms = (float(v) for v in out.splitlines()[1].split(","))
    # (B / (2 pi p J))^2 g(tau) with p = 3, tau = pi, g = 1/2
    assert k == pytest.approx(1 / (8 * math.pi**2), rel=1e-8)
    assert rms < 1e-8


def test_fit_scale_errors(tmp_path, capsys):
    target = tmp_path / "z.csv"
    target.write_text("a,b\n0,1\n0,2\n")
    assert run(["fit-scale", str(target), "a", "b"], capsys)[0] == cli.EXIT_CONFIG
    assert run(["fit-scale", str(target), "c", "b"], capsys)[0] == cli.EXIT_CONFIG
    assert run(["fit-scale", str(tmp_path / "missing.csv"), "a", "b"], capsys)[0] == cli.EXIT_CONFIG


@pytest.mark.parametrize("recipe", sorted(p.name for p in RECIPES.glob("*.cfg")))
def test_recipes_parse(recipe):
    settings = cli.build_settings(cli.read_config(RECIPES / recipe))
    assert settings.sweep.count >= 100
