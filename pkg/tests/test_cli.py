import csv
import json

import numpy as np
import pytest

from pathdep import cli
from pathdep.config import ConfigError, RunConfig
from pathdep.hawkes import simulate
from pathdep.kernels import PowerLawKernel
from pathdep.params import HawkesParams
from pathdep.volterra import TimeGrid


def run(args, capsys=None):
    code = cli.main([str(a) for a in args])
    if capsys is not None:
        capsys.readouterr()
    return code


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_config_defaults_and_overrides(tmp_path):
    cfg = RunConfig()
    assert cfg.market.theta == 5.0 and cfg.hawkes.p == 0.556834 and cfg.grid.N == 2048
    cfg.apply_overrides(["market.gamma=0.5", "sweep.delta=[0.6,0.9]", "grid.N=512"])
    assert cfg.market_params().gamma == 0.5 and cfg.sweep.delta == [0.6, 0.9] and cfg.time_grid().steps == 512
    for bad in (["market.nope=1"], ["grid.N=1.5"], ["novalue"], ["x.y=1"]):
        with pytest.raises(ConfigError):
            RunConfig().apply_overrides(bad)
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"claims": {"mu": 2.0}}))
    loaded = RunConfig.load(p)
    assert loaded.claims.mu == 2.0 and loaded.claims.theta_tilde == 0.2


def test_solve_outputs(tmp_path, capsys):
    out = tmp_path / "solve"
    assert run(["solve", "--out", out, "--set", "grid.N=256"]) == 0
    echoed = json.loads(capsys.readouterr().out)
    assert echoed["config"]["grid"]["N"] == 256 and echoed["config"]["market"]["theta"] == 5.0
    for name in ("config.json", "pd.csv", "vanilla.csv", "strategies.csv", "summary.json", "schema.json"):
        assert (out / name).exists()
    header, data = read_csv(out / "strategies.csv")
    assert header == ["t", "tau", "pd_weight", "vanilla_weight", "pd_deductible", "vanilla_deductible"]
    assert data[-1, 2] == 5.0 and data[-1, 4] == 0.2
    schema = json.loads((out / "schema.json").read_text())
    assert set(schema["pd.csv"]) == set(read_csv(out / "pd.csv")[0])
    summary = json.loads((out / "summary.json").read_text())
    assert summary["config"]["grid"]["N"] == 256


def test_csv_round_trip_precision(tmp_path, capsys):
    out = tmp_path / "s"
    run(["solve", "--out", out, "--set", "grid.N=64"], capsys)
    text = (out / "pd.csv").read_text().splitlines()[2].split(",")
    assert all(float(repr(float(x))) == float(x) for x in text)
    assert any(len(x) > 12 for x in text)


def test_solve_degenerate_columns_agree(tmp_path, capsys):
    out = tmp_path / "deg"
    run(["solve", "--out", out, "--set", "market.delta=1.0", "--set", "hawkes.rho1=0", "--set", "grid.N=4096"], capsys)
    _, d = read_csv(out / "strategies.csv")
    assert np.max(np.abs(d[:, 4] - d[:, 5])) < 1e-4
    np.testing.assert_allclose(d[:, 2], d[:, 3], rtol=1e-4)


def test_welfare_sweep_csv(tmp_path, capsys):
    out = tmp_path / "w"
    code = run(["welfare", "--out", out, "--set", "grid.N=256", "--set", "sweep.delta=[0.6,1.0]",
                "--set", "sweep.gamma=[1.0]", "--set", "sweep.p=[0.0,0.556834]"], capsys)
    assert code == 0
    header, data = read_csv(out / "welfare.csv")
    assert header == ["delta", "p", "gamma", "loss", "component_B", "component_C", "component_D"]
    assert data.shape == (4, 7)


def test_welfare_classical_sweep_zero(tmp_path, capsys):
    out = tmp_path / "w0"
    run(["welfare", "--out", out, "--set", "sweep.delta=[1.0]", "--set", "hawkes.rho1=0"], capsys)
    _, data = read_csv(out / "welfare.csv")
    assert np.all(np.abs(data[:, 3]) <= 1e-6)


def test_simulate_single_path(tmp_path, capsys):
    out = tmp_path / "one"
    assert run(["simulate", "--out", out, "--set", "sim.paths=1", "--set", "grid.N=256"], capsys) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["se_defined"] is False and s["se"] is None


def test_simulate_deterministic_and_reports_check(tmp_path, capsys):
    args = ["simulate", "--set", "sim.paths=2000", "--set", "sim.steps=64", "--set", "grid.N=512", "--seed", "5"]
    run(args + ["--out", tmp_path / "a"], capsys)
    run(args + ["--out", tmp_path / "b", "--dump-paths"], capsys)
    a = (tmp_path / "a" / "summary.json").read_bytes()
    assert a == (tmp_path / "b" / "summary.json").read_bytes()
    s = json.loads(a)
    assert {"analytic_mean", "mean", "se", "z_score", "within_3se", "objective"} <= set(s)
    assert (tmp_path / "b" / "terminal_wealth.csv").exists()


def test_calibrate_missing_file(tmp_path, capsys):
    assert run(["calibrate", tmp_path / "nope.csv", "--out", tmp_path / "c"]) == 1
    assert "error" in capsys.readouterr().err


def test_bad_config_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["solve", "--config", p, "--out", tmp_path / "x"], capsys) == 1
    assert run(["solve", "--set", "market.gamma=-1", "--out", tmp_path / "y"], capsys) == 1


def _poisson_catalog(tmp_path):
    p = HawkesParams(lambda_star=6.31, a0=0.0, a1=0.0, kernel=PowerLawKernel(0.0, 0.001, 0.5))
    cat = simulate(p, 15.0, TimeGrid(15.0, 64), seed=0)
    path = tmp_path / "poisson.csv"
    path.write_text("t_years\n" + "\n".join(repr(float(t)) for t in cat.times) + "\n")
    return path, len(cat)


def test_calibrate_poisson_catalog(tmp_path, capsys):
    path, k = _poisson_catalog(tmp_path)
    out = tmp_path / "cal"
    code = run(["calibrate", path, "--out", out, "--set", "calibrate.horizon=15", "--set", "calibrate.starts=2",
                "--set", "calibrate.steps=512"], capsys)
    assert code in (0, 2)
    params = json.loads((out / "params.json").read_text())
    assert params["lambda_star"] == pytest.approx(k / 15.0, rel=0.10)
    header, data = read_csv(out / "intensity.csv")
    assert header == ["t", "lambda"] and data.shape == (513, 2)


def test_calibrate_non_convergence_exit(tmp_path, capsys, monkeypatch):
    from pathdep import hawkes

    def fake(cat, grid, starts, seed):
        lam, ll = hawkes.poisson_log_likelihood(cat)
        base = HawkesParams(lambda_star=lam, a0=0.0, a1=0.0, kernel=PowerLawKernel(0.0, 1.0, 1.5))
        return hawkes.CalibrationResult(base, ll, False, ll)

    monkeypatch.setattr(cli, "calibrate", fake)
    path, _ = _poisson_catalog(tmp_path)
    assert run(["calibrate", path, "--out", tmp_path / "nc", "--set", "calibrate.horizon=15"], capsys) == 2


def test_ingest(tmp_path, capsys):
    raw = tmp_path / "raw.csv"
    raw.write_text("time,magnitude\n2010-01-01T00:00:00Z,5.5\n2011-01-01T00:00:00Z,4.0\n2012-01-01T00:00:00Z,5.0\n")
    out = tmp_path / "ing"
    code = run(["ingest", raw, "--out", out, "--set", "calibrate.start=2008-01-01T00:00:00Z",
                "--set", "calibrate.end=2023-01-01T00:00:00Z"], capsys)
    assert code == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["events"] == 2
    assert (out / "catalog.csv").read_text().startswith("t_years,magnitude")
