"""Command-line entry point: ``python -m pathdep <command>``.

Each invocation writes one run directory holding ``config.json``, CSV data and
``summary.json``. Exit codes: 0 success, 1 I/O or configuration error,
2 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import catalog as catalog_io
from .config import ConfigError, RunConfig
from .equilibrium_pd import expected_terminal_wealth as pd_terminal_wealth
from .equilibrium_pd import solve_pd
from .equilibrium_pd import value_function as pd_value
from .equilibrium_vanilla import expected_terminal_wealth as vanilla_terminal_wealth
from .equilibrium_vanilla import solve_vanilla
from .equilibrium_vanilla import value_function as vanilla_value
from .hawkes import EventCatalog, calibrate, intensity_on_grid
from .montecarlo import SimConfig, estimate_objective, simulate_wealth
from .volterra import TimeGrid, VolterraError
from .welfare import compute_welfare

log = logging.getLogger("pathdep")

EXIT_OK, EXIT_IO, EXIT_NUMERIC = 0, 1, 2


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _num(x):
    return repr(float(x))


def write_csv(path: Path, columns: dict) -> None:
    names = list(columns)
    data = [np.asarray(columns[n]) for n in names]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in zip(*data):
            w.writerow([_num(v) for v in row])


def write_json(path: Path, obj) -> None:
    text = json.dumps(_finite(obj), indent=2, sort_keys=True, default=_json_default, allow_nan=False)
    path.write_text(text + "\n")


def _finite(obj):
    # NaN/inf are not JSON; report them as null
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (float, np.floating)) and not np.isfinite(obj):
        return None
    return obj


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.bool_):
        return bool(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


COLUMN_DOCS = {
    "t": "calendar time (years)",
    "tau": "time to maturity T - t (years)",
    "Bbar": "convolution state paired with B (volatility system)",
    "Hbar": "convolution state paired with H (volatility system)",
    "Cbar": "convolution state paired with C (claims system)",
    "Mbar": "convolution state paired with M (claims system)",
    "B": "value-function coefficient on variance",
    "H": "expected-wealth coefficient on variance",
    "C": "value-function coefficient on intensity",
    "D": "value-function constant term",
    "N": "expected-wealth constant term",
    "trading_weight": "alpha X / sqrt(v), money in the stock per unit volatility",
    "deductible": "equilibrium deductible d",
    "pd_weight": "path-dependent trading weight",
    "vanilla_weight": "trading weight ignoring path dependence",
    "pd_deductible": "path-dependent deductible",
    "vanilla_deductible": "deductible ignoring path dependence",
    "lambda": "Hawkes intensity on the likelihood grid (events/year)",
    "t_years": "event time in years from the window start",
    "magnitude": "event magnitude",
    "delta": "fractional kernel exponent",
    "p": "power-law decay exponent",
    "gamma": "risk aversion",
    "loss": "certainty-equivalent welfare loss (fraction of discounted initial wealth)",
    "component_B": "variance part of the loss numerator",
    "component_C": "intensity part of the loss numerator",
    "component_D": "constant part of the loss numerator",
}


def write_schema(outdir: Path, files: dict) -> None:
    schema = {name: {c: COLUMN_DOCS.get(c, "") for c in cols} for name, cols in files.items()}
    write_json(outdir / "schema.json", schema)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _read_catalog(path: Path, cfg: RunConfig) -> EventCatalog:
    with open(path) as fh:
        header = fh.readline().strip().lower()
    if header.startswith("t_years"):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        horizon = cfg.calibrate.horizon
        if horizon is None:
            if data.size == 0:
                raise ConfigError("normalised catalog is empty; set calibrate.horizon")
            horizon = float(data[:, 0].max())
        return catalog_io.read_normalized(path, horizon)
    c = cfg.calibrate
    return catalog_io.load_catalog(path, c.min_magnitude, c.start, c.end)


def cmd_calibrate(args, cfg: RunConfig, out: Path) -> dict:
    cat = _read_catalog(Path(args.catalog), cfg)
    if len(cat) == 0:
        raise ConfigError("catalog has no events after filtering")
    grid = TimeGrid(cat.horizon, cfg.calibrate.steps)
    res = calibrate(cat, grid, starts=cfg.calibrate.starts, seed=cfg.calibrate.seed)
    path = intensity_on_grid(res.params, cat, grid)
    write_json(out / "params.json", res.params.as_dict())
    write_csv(out / "intensity.csv", path.columns())
    write_schema(out, {"intensity.csv": ["t", "lambda"]})
    summary = {
        "events": len(cat),
        "horizon": cat.horizon,
        "constant_rate": len(cat) / cat.horizon,
        "log_likelihood": res.log_likelihood,
        "baseline_log_likelihood": res.baseline_log_likelihood,
        "converged": res.converged,
        "clamped_grid_points": path.clamped,
        "params": res.params.as_dict(),
    }
    if not res.converged:
        summary["_exit"] = EXIT_NUMERIC
    return summary


def cmd_solve(args, cfg: RunConfig, out: Path) -> dict:
    market, claims, hawkes, grid = cfg.market_params(), cfg.claim_params(), cfg.hawkes_params(), cfg.time_grid()
    pd = solve_pd(market, claims, hawkes, grid)
    van = solve_vanilla(market, claims, hawkes.lambda_star, grid)
    pd_cols, van_cols = pd.columns(), van.columns()
    strat = {
        "t": pd_cols["t"],
        "tau": pd_cols["tau"],
        "pd_weight": pd_cols["trading_weight"],
        "vanilla_weight": van_cols["trading_weight"],
        "pd_deductible": pd_cols["deductible"],
        "vanilla_deductible": van_cols["deductible"],
    }
    write_csv(out / "pd.csv", pd_cols)
    write_csv(out / "vanilla.csv", van_cols)
    write_csv(out / "strategies.csv", strat)
    write_schema(out, {"pd.csv": list(pd_cols), "vanilla.csv": list(van_cols), "strategies.csv": list(strat)})
    return {
        "pd": {
            "value_function": pd_value(pd, market, hawkes.lambda_star),
            "expected_terminal_wealth": pd_terminal_wealth(pd, market, hawkes.lambda_star),
            "weight_at_t0": float(pd.trading_weight[-1]),
            "deductible_at_t0": float(pd.deductible[-1]),
        },
        "vanilla": {
            "value_function": vanilla_value(van, market),
            "expected_terminal_wealth": vanilla_terminal_wealth(van, market),
            "weight_at_t0": float(van.trading_weight[-1]),
            "deductible_at_t0": float(van.deductible[-1]),
        },
        "max_abs_weight_gap": float(np.max(np.abs(pd.trading_weight - van.trading_weight))),
        "max_abs_deductible_gap": float(np.max(np.abs(pd.deductible - van.deductible))),
    }


def cmd_welfare(args, cfg: RunConfig, out: Path) -> dict:
    market, claims, hawkes, grid = cfg.market_params(), cfg.claim_params(), cfg.hawkes_params(), cfg.time_grid()
    rows = {k: [] for k in ("delta", "p", "gamma", "loss", "component_B", "component_C", "component_D")}
    sw = cfg.sweep
    for delta, p, gamma in itertools.product(sw.delta, sw.p, sw.gamma):
        r = compute_welfare(market.with_(delta=delta, gamma=gamma), claims, hawkes.with_(p=p), grid)
        for k, v in (("delta", delta), ("p", p), ("gamma", gamma), ("loss", r.loss),
                     ("component_B", r.component_B), ("component_C", r.component_C), ("component_D", r.component_D)):
            rows[k].append(v)
        log.info("delta=%g p=%g gamma=%g loss=%.6g", delta, p, gamma, r.loss)
    write_csv(out / "welfare.csv", rows)
    write_schema(out, {"welfare.csv": list(rows)})
    return {"rows": len(rows["loss"]), "min_loss": min(rows["loss"]), "max_loss": max(rows["loss"])}


def cmd_simulate(args, cfg: RunConfig, out: Path) -> dict:
    market, claims, hawkes, grid = cfg.market_params(), cfg.claim_params(), cfg.hawkes_params(), cfg.time_grid()
    s = cfg.sim
    if s.world == "vanilla":
        market, hawkes = market.with_(delta=1.0), hawkes.with_(rho1=0.0)
    elif s.world != "model":
        raise ConfigError(f"sim.world must be 'vanilla' or 'model', not {s.world!r}")
    if s.strategy == "vanilla":
        coeffs = solve_vanilla(market, claims, hawkes.lambda_star, grid)
        g0 = vanilla_terminal_wealth(coeffs, market)
    elif s.strategy == "pd":
        coeffs = solve_pd(market, claims, hawkes, grid)
        g0 = pd_terminal_wealth(coeffs, market, hawkes.lambda_star)
    else:
        raise ConfigError(f"sim.strategy must be 'vanilla' or 'pd', not {s.strategy!r}")
    sim = SimConfig(paths=s.paths, grid=TimeGrid(grid.horizon, s.steps), seed=s.seed, clamp=s.clamp, drift=s.drift)
    bundle = simulate_wealth(market, claims, hawkes, coeffs, sim)
    summary = bundle.summary()
    summary["objective"] = estimate_objective(bundle, market.gamma)
    summary["analytic_mean"] = g0
    if bundle.se_defined and bundle.se > 0:
        z = (bundle.mean - g0) / bundle.se
        summary["z_score"] = z
        summary["within_3se"] = bool(abs(z) <= 3.0)
    else:
        log.warning("standard error undefined with %d path(s)", bundle.paths)
        summary["z_score"] = None
        summary["within_3se"] = None
    if args.dump_paths:
        write_csv(out / "terminal_wealth.csv", {"terminal_wealth": bundle.terminal})
    return summary


def cmd_ingest(args, cfg: RunConfig, out: Path) -> dict:
    c = cfg.calibrate
    cat = catalog_io.load_catalog(Path(args.catalog), c.min_magnitude, c.start, c.end)
    catalog_io.write_catalog(cat, out / "catalog.csv")
    cols = ["t_years"] + (["magnitude"] if cat.magnitudes is not None else [])
    write_schema(out, {"catalog.csv": cols})
    return {"events": len(cat), "horizon": cat.horizon, "constant_rate": len(cat) / cat.horizon}


COMMANDS = {
    "calibrate": cmd_calibrate,
    "solve": cmd_solve,
    "welfare": cmd_welfare,
    "simulate": cmd_simulate,
    "ingest": cmd_ingest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--out", type=Path, help="run directory (default: runs/<command>)")
    common.add_argument("--seed", type=int, help="seed for simulation and multi-start draws")
    common.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                        help="override one config value; repeatable")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="pathdep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("calibrate", parents=[common], help="fit Hawkes parameters to a catalog")
    p.add_argument("catalog", type=Path)
    sub.add_parser("solve", parents=[common], help="solve both equilibria and write strategies")
    sub.add_parser("welfare", parents=[common], help="welfare-loss sweep over delta, p, gamma")
    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of expected terminal wealth")
    p.add_argument("--dump-paths", action="store_true", help="also write per-path terminal wealth")
    p = sub.add_parser("ingest", parents=[common], help="normalise a raw catalog CSV")
    p.add_argument("catalog", type=Path)
    return parser


def resolve_config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    cfg.apply_overrides(args.set)
    if args.seed is not None:
        cfg.sim.seed = args.seed
        cfg.calibrate.seed = args.seed
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        out = args.out or Path("runs") / args.command
        out.mkdir(parents=True, exist_ok=True)
        resolved = cfg.to_dict()
        print(json.dumps({"command": args.command, "config": resolved}, indent=2, sort_keys=True))
        write_json(out / "config.json", resolved)
        summary = COMMANDS[args.command](args, cfg, out)
    except (ConfigError, catalog_io.CatalogParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (VolterraError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    code = summary.pop("_exit", EXIT_OK)
    write_json(out / "summary.json", {"command": args.command, "config": resolved, **summary})
    if code == EXIT_NUMERIC:
        print("calibration did not improve on the constant-intensity fit", file=sys.stderr)
    return code
