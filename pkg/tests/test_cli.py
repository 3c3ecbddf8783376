import json
import subprocess
import sys

import pytest

from spectral_levy.cli import main

TRIPLET = {
    "gamma": 1.0,
    "sigma2": 1.0,
    "lambda": 1.0,
    "jump_density": {"family": "gaussian", "params": {"mean": 0.0, "sd": 1.0}},
    "class": {"beta": 1, "L": 10, "Lambda": 2, "K": 10, "Sigma": 2, "Gamma": 2, "C": 10},
}


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "triplet.json"
    path.write_text(json.dumps(TRIPLET))
    return str(path)


def test_kernels(capsys):
    assert main(["kernels", "--beta", "1"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [k["kind"] for k in report] == ["V", "U", "W"]
    assert all(max(k["moments"]["residuals"]) < 1e-10 for k in report)
    assert report[2]["terms"] == [[3, 2.5]]


def test_simulate_then_estimate(tmp_path, config):
    assert main(["simulate", "--config", config, "--n", "500", "--seed", "4", "--out", str(tmp_path / "s")]) == 0
    sample = tmp_path / "s" / "sample.csv"
    assert len(sample.read_text().splitlines()) == 500
    outs = []
    for run in ("e1", "e2"):
        out = tmp_path / run
        assert main(["estimate", "--config", config, "--input", str(sample), "--out", str(out)]) == 0
        outs.append(((out / "estimate.json").read_bytes(), (out / "density.csv").read_bytes()))
    assert outs[0] == outs[1]
    est = json.loads(outs[0][0])
    assert {"sigma2_hat", "lambda_hat", "gamma_hat", "flags", "config"} <= set(est)
    assert outs[0][1].splitlines()[0] == b"x,rho_hat"


def test_estimate_from_simulation(tmp_path, config):
    assert main(["estimate", "--config", config, "--n", "300", "--seed", "1", "--grid-size", "513", "--out", str(tmp_path)]) == 0
    est = json.loads((tmp_path / "estimate.json").read_text())
    assert est["config"]["grid_size"] == 513


def test_experiment(tmp_path):
    plan = {
        "triplet": {k: TRIPLET[k] for k in ("gamma", "sigma2", "lambda", "jump_density")},
        "class": TRIPLET["class"],
        "n_values": [100, 400],
        "replicates": 2,
        "master_seed": 5,
    }
    path = tmp_path / "plan.json"
    path.write_text(json.dumps(plan))
    assert main(["experiment", "--config", str(path), "--out", str(tmp_path / "out")]) == 0
    header = (tmp_path / "out" / "aggregates.csv").read_text().splitlines()[0]
    assert header == "n,mse_sigma2,mse_lambda,mse_gamma,mean_mise,flag_rate"


def test_check_class(config, capsys):
    assert main(["check-class", "--config", config]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "gamma": 1,\n  oops\n}')
    assert main(["check-class", "--config", str(bad)]) == 1
    assert f"{bad}:3:" in capsys.readouterr().err


def test_malformed_csv(tmp_path, config, capsys):
    bad = tmp_path / "x.csv"
    bad.write_text("1.0\nabc\n")
    assert main(["estimate", "--config", config, "--input", str(bad), "--out", str(tmp_path)]) == 1
    assert ":2:" in capsys.readouterr().err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["kernels"])
    assert info.value.code == 1


def test_missing_config():
    assert main(["check-class"]) == 1


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "spectral_levy.cli", "kernels", "--beta", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)[0]["terms"][0][0] == 4
