#!/usr/bin/env python3
"""Reproduce the scaling experiment (scenario 2).

Sweeps a = 20, 40, ..., 200 for the three operators (geometric step size
tied to a/4) and writes the aggregate CSV consumed by the plot-scaling
tool from the plots package.

Examples:
    python scripts/reproduce_scaling.py --agg scaling_n2.csv
    python scripts/reproduce_scaling.py --n 10 --agg scaling_n10.csv   # slow
"""

import argparse
import time

from intmoea.experiments import (
    run_scenario,
    scenario_two_grid,
    write_aggregate_csv,
    write_results_csv,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--runs", type=int, default=50)
    ap.add_argument("--seed", type=int, default=20_240_817)
    ap.add_argument("--parallel", type=int, default=1)
    ap.add_argument("--out", help="per-run CSV path")
    ap.add_argument("--agg", help="aggregate CSV path")
    args = ap.parse_args()

    spec = scenario_two_grid(n=args.n, runs_per_cell=args.runs, base_seed=args.seed)
    t0 = time.time()
    results = run_scenario(spec, parallelism=args.parallel)
    elapsed = time.time() - t0

    for cell in results:
        s = cell.stats
        print(f"a={cell.a:4d} {cell.mutation.kind:>9}: mean_total={s.mean_total:12.0f} "
              f"sd%={s.sd_pct_total:4.1f}")
    print(f"[{elapsed:.0f}s, n={args.n}, {args.runs} runs/cell]")

    if args.out:
        write_results_csv(args.out, results)
    if args.agg:
        write_aggregate_csv(args.agg, results)


if __name__ == "__main__":
    main()
