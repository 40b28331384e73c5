"""Welfare-loss tables over (delta, p) and (delta, gamma).

    python scripts/welfare_sweep.py --out runs/welfare --steps 2048
"""
import argparse
import itertools
from pathlib import Path

from pathdep.cli import write_csv
from pathdep.params import ClaimParams, HawkesParams, MarketParams
from pathdep.volterra import TimeGrid
from pathdep.welfare import compute_welfare

COLUMNS = ("delta", "p", "gamma", "loss", "component_B", "component_C", "component_D")


def sweep(deltas, powers, gammas, grid):
    rows = {c: [] for c in COLUMNS}
    market, claims, hawkes = MarketParams(), ClaimParams(), HawkesParams()
    for d, p, g in itertools.product(deltas, powers, gammas):
        r = compute_welfare(market.with_(delta=d, gamma=g), claims, hawkes.with_(p=p), grid)
        for c, v in zip(COLUMNS, (d, p, g, r.loss, r.component_B, r.component_C, r.component_D)):
            rows[c].append(v)
        print(f"delta={d:<4g} p={p:<8g} gamma={g:<4g} loss={r.loss:.6g}")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("runs/welfare"))
    ap.add_argument("--horizon", type=float, default=10.0)
    ap.add_argument("--steps", type=int, default=2048)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    grid = TimeGrid(args.horizon, args.steps)
    deltas = [0.6, 0.7, 0.8, 0.9, 1.0]
    write_csv(args.out / "loss_delta_p.csv", sweep(deltas, [0.0, 0.3, 0.556834, 0.8], [1.0], grid))
    write_csv(args.out / "loss_delta_gamma.csv", sweep(deltas, [0.0], [0.5, 1.0, 1.5], grid))
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
