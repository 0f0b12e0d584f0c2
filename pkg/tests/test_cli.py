import csv
import json

import pytest

from conormal import cli
from conormal.errors import ConfigError
from conormal.viterbo import GOLDEN


def run(tmp_path, *argv, config=None, name="out"):
    out = tmp_path / name
    args = list(argv) + ["--out", str(out)]
    if config is not None:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(config))
        args += ["--config", str(path)]
    return cli.main(args), out


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_spectral_golden_case(tmp_path):
    cfg = {"hamiltonian": {"type": "lifted", "f": {"shifted_cosine": GOLDEN}}, "target": {"point": GOLDEN}}
    code, out = run(tmp_path, "spectral", "--grid", "1024", config=cfg)
    assert code == cli.EXIT_OK
    (row,) = rows(out / "spectral.csv")
    assert float(row["value"]) == pytest.approx(-1.0, abs=1e-6)
    assert float(row["error_bound"]) > 0 and float(row["step"]) > 0
    assert (out / "profile.svg").exists()


def test_spectral_whole_writes_persistence(tmp_path):
    cfg = {"target": {"whole": True}, "class": "point"}
    code, out = run(tmp_path, "spectral", "--grid", "256", config=cfg)
    assert code == 0
    assert float(rows(out / "spectral.csv")[0]["value"]) == pytest.approx(-1.0, abs=1e-5)
    assert (out / "persistence.svg").exists()


def test_non_graphical_exits_2(tmp_path):
    cfg = {"hamiltonian": {"type": "bump", "q0": 0.5, "p0": 0.1, "r_q": 0.3, "r_p": 0.3, "A": 1.0}, "step": 0.01}
    code, _ = run(tmp_path, "spectral", "--grid", "512", config=cfg)
    assert code == cli.EXIT_ORACLE


@pytest.mark.parametrize("argv", [
    ["spectral", "--grid", "-4"],
    ["counterexample", "--n-max", "0"],
    ["homogenize", "--tol", "-1"],
    ["dimension", "--grid", "64"],  # flag that does not apply
    ["nosuchcommand"],
    ["spectral", "--grid", "many"],
])
def test_config_errors_exit_3(tmp_path, argv, capsys):
    code, _ = run(tmp_path, *argv)
    assert code == cli.EXIT_CONFIG
    assert "error" in capsys.readouterr().err


def test_unknown_config_key_rejected(tmp_path):
    code, _ = run(tmp_path, "counterexample", config={"n_max": 100, "colour": "blue"})
    assert code == cli.EXIT_CONFIG
    with pytest.raises(ConfigError):
        cli.load_config("viterbo", overrides={"grid": 10})


def test_bad_hamiltonian_rejected(tmp_path):
    code, _ = run(tmp_path, "spectral", config={"hamiltonian": {"type": "warp"}})
    assert code == cli.EXIT_CONFIG


def test_flags_override_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"n_max": 100, "seed": 4}))
    cfg = cli.load_config("counterexample", str(path), {"n_max": 50, "seed": None})
    assert cfg["n_max"] == 50 and cfg["seed"] == 4


def test_config_round_trip(tmp_path):
    code, out = run(tmp_path, "counterexample", "--n-max", "2000", config={"theta_low": "1/4"})
    assert code == 0
    saved = json.loads((out / "config.json").read_text())
    again = cli.load_config("counterexample", str(out / "config.json"), {})
    assert again == saved
    assert saved["n_max"] == 2000 and saved["theta_low"] == "1/4"


def test_counterexample_command(tmp_path):
    code, out = run(tmp_path, "counterexample", "--n-max", "1000000")
    assert code == 0
    summary = rows(out / "counterexample_summary.csv")
    clusters = [r for r in summary if r["item"] == "cluster"]
    assert len(clusters) >= 2
    assert (out / "ratios.svg").exists()


def test_homogenize_columns(tmp_path):
    code, out = run(tmp_path, "homogenize", "--n-max", "12", "--grid", "256")
    assert code == 0
    data = rows(out / "homogenize.csv")
    assert list(data[0]) == ["n", "ell_N", "ell_M", "a_n", "b_n", "a_ratio", "b_ratio", "error_bound", "step"]
    assert len(data) == 12
    assert all(abs(float(r["a_ratio"])) <= 1e-6 for r in data)


def test_dimension_and_viterbo(tmp_path):
    code, out = run(tmp_path, "dimension", "--trials", "500", name="dim")
    assert code == 0 and all(r["ok"] == "True" for r in rows(out / "dimension.csv"))
    code, out = run(tmp_path, "viterbo", "--n-max", "2000", name="vit")
    assert code == 0
    summary = {r["item"]: float(r["value"]) for r in rows(out / "viterbo_summary.csv")}
    assert summary["lhs"] == pytest.approx(-1.0) and summary["separation"] >= 1.9


def test_axioms_command(tmp_path):
    code, out = run(tmp_path, "axioms", "--trials", "2", "--n-max", "10")
    assert code == 0
    data = rows(out / "axioms.csv")
    assert {"step", "grid"} <= set(data[0])


@pytest.mark.parametrize("argv", [
    ["counterexample", "--n-max", "5000"],
    ["homogenize", "--n-max", "10", "--grid", "128"],
    ["dimension", "--trials", "200"],
])
def test_csv_determinism(tmp_path, argv):
    _, a = run(tmp_path, *argv, name="a")
    _, b = run(tmp_path, *argv, name="b")
    for f in sorted(p.name for p in a.iterdir()):
        if f.endswith(".csv") or f.endswith(".svg"):
            assert (a / f).read_bytes() == (b / f).read_bytes(), f
