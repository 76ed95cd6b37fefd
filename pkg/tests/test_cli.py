import json
import math
import subprocess
import sys

import pytest

from origin_universality import cli
from origin_universality.output import read_csv_body


def _summary(out, command):
    return json.loads((out / f"{command}_summary.json").read_text())


def test_equilibrium_command(tmp_path):
    out = tmp_path / "new" / "dir"
    assert cli.main(["equilibrium", "--out", str(out)]) == cli.EXIT_OK
    s = _summary(out, "equilibrium")
    assert s["passed"]
    text = (out / "equilibrium_density.csv").read_text()
    assert text.startswith("# config_sha256=")
    assert (out / "equilibrium_density.png").stat().st_size > 0
    meta = json.loads((out / "equilibrium_metadata.json").read_text())
    assert "config_sha256" in meta


def test_equilibrium_endpoints(tmp_path):
    cli.main(["equilibrium", "--out", str(tmp_path)])
    body = read_csv_body(tmp_path / "equilibrium_endpoints.csv").strip().splitlines()
    assert body[0] == "index,endpoint"
    ends = [float(line.split(",")[1]) for line in body[1:]]
    assert ends == pytest.approx([-1.41421356, 1.41421356], abs=1e-6)
    m = _summary(tmp_path, "equilibrium")["metrics"]
    assert m["left"] == pytest.approx(-math.sqrt(2), abs=1e-8)
    assert m["right"] == pytest.approx(math.sqrt(2), abs=1e-8)


def test_inadmissible_alpha(tmp_path, capsys):
    assert cli.main(["universality", "--alpha", "-0.5", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert "alpha must exceed -1/2" in capsys.readouterr().err


def test_bad_arguments(tmp_path):
    assert cli.main(["nosuch"]) == cli.EXIT_CONFIG
    assert cli.main(["szego", "--seed", "-3"]) == cli.EXIT_CONFIG
    assert cli.main(["szego", "--n-list", "8,x"]) == cli.EXIT_CONFIG


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"alpah": 1.0}))
    assert cli.main(["equilibrium", "--config", str(cfg), "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert cli.main(["equilibrium", "--config", str(tmp_path / "missing.yaml")]) == cli.EXIT_CONFIG


def test_yaml_and_toml_configs_agree(tmp_path):
    y = tmp_path / "c.yaml"
    y.write_text("alpha: 0.5\nn_list: [8, 16]\nseed: 4\n")
    t = tmp_path / "c.toml"
    t.write_text("alpha = 0.5\nn_list = [8, 16]\nseed = 4\n")
    assert cli.main(["kernel-table", "--config", str(y), "--out", str(tmp_path / "y")]) == 0
    assert cli.main(["kernel-table", "--config", str(t), "--out", str(tmp_path / "t")]) == 0
    a = (tmp_path / "y" / "kernel-table_values.csv").read_text()
    b = (tmp_path / "t" / "kernel-table_values.csv").read_text()
    assert a == b


def test_szego_alpha_zero_is_exact(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"szego": {"alphas": [0.0], "bands": [[-1.5, -0.7], [-0.3, 1.0]]}}))
    assert cli.main(["szego", "--config", str(cfg), "--out", str(tmp_path)]) == cli.EXIT_OK
    m = _summary(tmp_path, "szego")["metrics"]
    assert max(v for k, v in m.items() if k.endswith(("band_jump", "gap_jump", "linear"))) <= 1e-12


def test_parametrix_decay_table(tmp_path):
    code = cli.main(["parametrix", "--alpha", "1", "--n-list", "8,16,32,64", "--out", str(tmp_path)])
    assert code == cli.EXIT_OK
    body = read_csv_body(tmp_path / "parametrix_decay.csv")
    assert len(body.strip().splitlines()) == 1 + 4
    assert "norm=max-entry" in (tmp_path / "parametrix_decay.csv").read_text()


def test_universality_summary(tmp_path):
    # default configuration: the exit code must agree with the recorded pass flag
    code = cli.main(["universality", "--out", str(tmp_path / "default")])
    s = _summary(tmp_path / "default", "universality")
    assert {"slope", "unweighted_slope", "strictly_decreasing"} <= set(s["metrics"])
    assert isinstance(s["passed"], bool)
    assert code == (cli.EXIT_OK if s["passed"] else cli.EXIT_THRESHOLD)
    assert bool(s["failing_metrics"]) == (not s["passed"])
    code = cli.main(["universality", "--alpha", "1", "--out", str(tmp_path / "one")])
    s = _summary(tmp_path / "one", "universality")
    assert -1.3 <= s["metrics"]["slope"] <= -0.7
    assert code == cli.EXIT_OK and s["passed"]


def test_mcmc_determinism(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("mcmc: {n_particles: 10, sweeps: 300, burn_in: 50, chains: 2}\nseed: 9\n")
    runs = []
    for k in range(2):
        out = tmp_path / f"r{k}"
        cli.main(["mcmc", "--config", str(cfg), "--out", str(out)])
        runs.append(out)
    for name in ("mcmc_histogram.csv", "mcmc_chains.csv"):
        assert read_csv_body(runs[0] / name) == read_csv_body(runs[1] / name)
    assert (runs[0] / "mcmc_histogram.png").read_bytes() == (runs[1] / "mcmc_histogram.png").read_bytes()
    assert (runs[0] / "mcmc_summary.json").read_text() == (runs[1] / "mcmc_summary.json").read_text()


def test_module_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "origin_universality", "equilibrium", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
        check=False,
    )
    assert res.returncode == 0, res.stderr
