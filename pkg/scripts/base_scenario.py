"""Trading-weight and deductible series for the base scenario.

Writes two CSVs: weights across delta and gamma, and deductibles across the
Hawkes decay exponent p, each next to the classical benchmark.

    python scripts/base_scenario.py --out runs/base --steps 2048
"""
import argparse
from pathlib import Path

from pathdep.cli import write_csv
from pathdep.equilibrium_pd import solve_pd
from pathdep.equilibrium_vanilla import solve_vanilla
from pathdep.params import ClaimParams, HawkesParams, MarketParams
from pathdep.volterra import TimeGrid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("runs/base"))
    ap.add_argument("--horizon", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=2048)
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.6, 0.7, 0.8, 0.9])
    ap.add_argument("--powers", type=float, nargs="+", default=[0.3, 0.556834, 0.8])
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    grid = TimeGrid(args.horizon, args.steps)
    claims, hawkes = ClaimParams(), HawkesParams()
    t = grid.horizon - grid.times[::-1]

    for gamma in (1.0, 0.5):
        market = MarketParams(gamma=gamma)
        cols = {"t": t}
        for d in args.deltas:
            cols[f"pd_delta_{d:g}"] = solve_pd(market.with_(delta=d), claims, hawkes, grid).trading_weight[::-1]
        cols["vanilla"] = solve_vanilla(market, claims, hawkes.lambda_star, grid).trading_weight[::-1]
        write_csv(args.out / f"weights_gamma_{gamma:g}.csv", cols)

        cols = {"t": t}
        for p in args.powers:
            cols[f"pd_p_{p:g}"] = solve_pd(market, claims, hawkes.with_(p=p), grid).deductible[::-1]
        cols["vanilla"] = solve_vanilla(market, claims, hawkes.lambda_star, grid).deductible[::-1]
        write_csv(args.out / f"deductibles_gamma_{gamma:g}.csv", cols)

        mid = grid.steps // 2
        summary = ", ".join(f"{k}={v[mid]:.4f}" for k, v in cols.items() if k != "t")
        print(f"gamma={gamma}: deductible at mid-horizon {summary}")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
