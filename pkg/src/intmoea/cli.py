"""Command-line front door: single runs, scenario grids, bounds, verification.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import bounds as bounds_mod
from . import experiments as ex
from .core import BenchmarkConfig, Point, brute_force_front, pareto_front
from .moea import (
    AlgorithmKind,
    InvariantViolation,
    RunConfig,
    run,
    run_details,
    run_with_invariant_checks,
)
from .samplers import (
    BilateralGeometric,
    MutationLaw,
    PowerLaw,
    RandomStream,
    UnitStep,
    chi_square_gof,
    truncated_expectation,
    truncated_expectation_lower_bound,
)


def _add_law_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mutation", required=True, choices=["unit", "geom", "powerlaw"])
    p.add_argument("--q", type=float, help="geometric parameter q in (0,1)")
    p.add_argument("--inv-q", type=int, help="geometric step size 1/q")
    p.add_argument("--beta", type=float, help="power-law exponent in (1,2), default 1.5")


def _law_from_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> MutationLaw:
    if args.mutation == "unit":
        if args.q is not None or args.inv_q is not None or args.beta is not None:
            parser.error("--q/--inv-q/--beta are not valid with --mutation unit")
        return UnitStep()
    if args.mutation == "geom":
        if args.beta is not None:
            parser.error("--beta is only valid with --mutation powerlaw")
        if (args.q is None) == (args.inv_q is None):
            parser.error("--mutation geom needs exactly one of --q / --inv-q")
        q = args.q if args.q is not None else 1.0 / args.inv_q
        try:
            return BilateralGeometric(q)
        except ValueError as e:
            parser.error(str(e))
    if args.q is not None or args.inv_q is not None:
        parser.error("--q/--inv-q are only valid with --mutation geom")
    beta = 1.5 if args.beta is None else args.beta
    try:
        return PowerLaw(beta)
    except ValueError as e:
        parser.error(str(e))


def _x0_from_args(
    parser: argparse.ArgumentParser, args: argparse.Namespace, a: int, n: int
) -> Point:
    if args.x0 is not None and args.x0_rule is not None:
        parser.error("give either --x0 or --x0-rule, not both")
    if args.x0 is not None:
        try:
            coords = tuple(int(v) for v in args.x0.split(","))
        except ValueError:
            parser.error(f"--x0 must be a comma list of integers, got {args.x0!r}")
        if len(coords) != n:
            parser.error(f"--x0 has {len(coords)} coordinates but --n is {n}")
        return Point(coords)
    # default follows the experiment start rule
    return ex.x0_for(a, n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="intmoea",
        description="Archive-based evolutionary bi-objective optimization on Z^n",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one seeded run and print its record")
    p_run.add_argument("--algo", required=True, choices=["semo", "gsemo"])
    _add_law_flags(p_run)
    p_run.add_argument("--a", required=True, type=int)
    p_run.add_argument("--n", type=int, default=2)
    p_run.add_argument("--x0", help="comma list of integers, e.g. 0,20000")
    p_run.add_argument("--x0-rule", choices=["100a"], help="start at (0, 100a, 0, ...)")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--stream-id", type=int, default=0)
    p_run.add_argument("--max-evals", type=int, default=10**9)
    p_run.add_argument("--check-invariants", action="store_true")
    p_run.add_argument("--check-every", type=int, default=1000)

    for name, help_text in (
        ("scenario1", "operator sweep at fixed a (default a=200)"),
        ("scenario2", "scaling sweep over a = 20..200 step 20"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--n", type=int, default=2)
        if name == "scenario1":
            p.add_argument("--a", type=int, default=200)
        p.add_argument("--runs", type=int, default=50)
        p.add_argument("--seed", type=int, default=ex.DEFAULT_BASE_SEED)
        p.add_argument("--out", help="per-run CSV path")
        p.add_argument("--agg", help="aggregate CSV path")
        p.add_argument("--parallel", type=int, default=1)

    p_b = sub.add_parser("bounds", help="evaluate the closed-form runtime bounds")
    p_b.add_argument("--algo", required=True, choices=["semo", "gsemo"])
    _add_law_flags(p_b)
    p_b.add_argument("--a", required=True, type=int)
    p_b.add_argument("--n", type=int, default=2)
    p_b.add_argument("--x0-norm", required=True, type=int)
    p_b.add_argument("--shape-c", type=float, default=1.0,
                     help="scale for the exponential-tail shape expression")
    p_b.add_argument("--ezz-c", type=float, default=0.5,
                     help="constant C for the certified geometric phase-1 term")

    p_v = sub.add_parser("verify", help="run the verification suites")
    p_v.add_argument("--quick", action="store_true", help="smaller sample sizes")

    return parser


def _cmd_run(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    law = _law_from_args(parser, args)
    x0 = _x0_from_args(parser, args, args.a, args.n)
    try:
        cfg = RunConfig(
            algorithm=AlgorithmKind.from_string(args.algo),
            law=law,
            benchmark=BenchmarkConfig(a=args.a, n=args.n),
            x0=x0,
            seed=args.seed,
            stream_id=args.stream_id,
            max_evaluations=args.max_evals,
        )
    except (ValueError, OverflowError) as e:
        parser.error(str(e))
    try:
        if args.check_invariants:
            rec = run_with_invariant_checks(cfg, check_every=args.check_every)
        else:
            rec = run(cfg)
    except InvariantViolation as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return 1
    print(
        f"phase1_evals={rec.phase1_evals} phase2_evals={rec.phase2_evals} "
        f"total_evals={rec.total_evals} completed={'true' if rec.completed else 'false'} "
        f"seed={rec.seed} stream_id={rec.stream_id}"
    )
    return 0


def _cmd_scenario(args: argparse.Namespace, which: int) -> int:
    if which == 1:
        spec = ex.scenario_one_grid(
            n=args.n, a=args.a, runs_per_cell=args.runs, base_seed=args.seed
        )
    else:
        spec = ex.scenario_two_grid(
            n=args.n, runs_per_cell=args.runs, base_seed=args.seed
        )
    results = ex.run_scenario(spec, parallelism=args.parallel)
    for cell in results:
        s = cell.stats
        param = cell.mutation.param_value(cell.a)
        param_s = "" if param is None else f" param={param:g}"
        flag = " DEGRADED" if cell.degraded else ""
        print(
            f"a={cell.a} {cell.mutation.kind}{param_s}: "
            f"mean_p1={s.mean_phase1:.6g} sd%={s.sd_pct_phase1:.3g} "
            f"mean_p2={s.mean_phase2:.6g} sd%={s.sd_pct_phase2:.3g} "
            f"mean_total={s.mean_total:.6g} sd%={s.sd_pct_total:.3g}{flag}"
        )
    if args.out:
        ex.write_results_csv(args.out, results)
    if args.agg:
        ex.write_aggregate_csv(args.agg, results)
    return 0


def _cmd_bounds(parser: argparse.ArgumentParser, args: argparse.Namespace) -> int:
    law = _law_from_args(parser, args)
    algo = AlgorithmKind.from_string(args.algo)
    kwargs = {}
    if isinstance(law, BilateralGeometric):
        kwargs["q"] = law.q
    elif isinstance(law, PowerLaw):
        kwargs["beta"] = law.beta
    try:
        inp = bounds_mod.BoundInputs(algo, args.n, args.a, args.x0_norm, **kwargs)
    except ValueError as e:
        parser.error(str(e))
    if isinstance(law, UnitStep):
        total = bounds_mod.bound_unit_step(inp)
        phases = bounds_mod.bound_lemma_phase_terms(inp)
        print(f"{total:g}")
        print(f"phase1_bound={phases.phase1:g} phase2_bound={phases.phase2:g}")
    elif isinstance(law, PowerLaw):
        total = bounds_mod.bound_power_law(inp)
        phases = bounds_mod.bound_lemma_phase_terms(inp)
        print(f"{total:g}")
        print(f"phase1_bound={phases.phase1:g} phase2_bound={phases.phase2:g}")
    else:
        shape = bounds_mod.bound_exp_tail_shape(inp, C=args.shape_c)
        print(f"{shape:g}")
        if law.q <= args.ezz_c and args.a > 0:
            phases = bounds_mod.bound_lemma_phase_terms(inp, C=args.ezz_c)
            print(
                f"phase1_bound={phases.phase1:g} "
                f"phase2_shape={phases.phase2:g} (shape only)"
            )
    return 0


def _verify_front_equivalence() -> list[str]:
    failures = []
    for a in range(0, 4):
        for n in (2, 3):
            cfg = BenchmarkConfig(a=a, n=n)
            if brute_force_front(cfg, a + 2) != pareto_front(cfg):
                failures.append(f"front mismatch for a={a}, n={n}")
    return failures


def _verify_samplers(draws: int) -> list[str]:
    failures = []
    cases = [
        (BilateralGeometric(0.5), 101),
        (BilateralGeometric(1.0 / 50.0), 102),
        (BilateralGeometric(1.0 / 500.0), 103),
        (PowerLaw(1.5), 104),
        (PowerLaw(1.2), 105),
    ]
    for law, seed in cases:
        p = chi_square_gof(law, RandomStream(seed).generator(), draws=draws)
        if p < 1e-3:
            failures.append(f"chi-square rejects {law}: p={p:.2e}")
    return failures


def _verify_truncated_moments() -> list[str]:
    failures = []
    import numpy as np

    for q in np.linspace(0.02, 0.9, 45):
        q = float(q)
        for z in (0, 1, 2, 5, 10, 100, 1000):
            closed = truncated_expectation(q, z)
            brute = sum(
                k * (q / (2.0 - q)) * (1.0 - q) ** k for k in range(0, z + 1)
            )
            if abs(closed - brute) > 1e-9:
                failures.append(f"closed form deviates at q={q:.3g}, z={z}")
            for C in (0.25, 0.5, 0.9):
                if q <= C:
                    lb = truncated_expectation_lower_bound(q, z, C)
                    if closed < lb - 1e-12:
                        failures.append(
                            f"lower bound exceeds moment at q={q:.3g}, z={z}, C={C}"
                        )
    return failures


def _verify_invariant_soak(total_iterations: int) -> list[str]:
    failures = []
    configs = [
        (AlgorithmKind.GSEMO, UnitStep(), 3, 2, (0, 60)),
        (AlgorithmKind.SEMO, UnitStep(), 5, 3, (7, -9, 4)),
        (AlgorithmKind.GSEMO, BilateralGeometric(0.1), 8, 2, (0, 800)),
        (AlgorithmKind.GSEMO, PowerLaw(1.5), 8, 2, (0, 800)),
        (AlgorithmKind.SEMO, PowerLaw(1.3), 4, 4, (11, -3, 8, 2)),
        (AlgorithmKind.GSEMO, BilateralGeometric(0.02), 12, 2, (0, 1200)),
    ]
    per = max(total_iterations // len(configs), 1)
    for i, (algo, law, a, n, x0) in enumerate(configs):
        cfg = RunConfig(
            algorithm=algo,
            law=law,
            benchmark=BenchmarkConfig(a=a, n=n),
            x0=Point(x0),
            seed=900 + i,
            stream_id=i,
            max_evaluations=per,
        )
        for impl in ("indexed", "scan"):
            try:
                run_with_invariant_checks(cfg, check_every=1, archive_impl=impl)
            except InvariantViolation as e:
                failures.append(f"soak config {i} ({impl}): {e}")
    return failures


def _verify_engine_agreement() -> list[str]:
    failures = []
    for i, (law, a) in enumerate(
        [(UnitStep(), 4), (BilateralGeometric(0.05), 10), (PowerLaw(1.5), 10)]
    ):
        cfg = RunConfig(
            algorithm=AlgorithmKind.GSEMO,
            law=law,
            benchmark=BenchmarkConfig(a=a, n=2),
            x0=Point((0, 100 * a)),
            seed=700 + i,
            stream_id=i,
            max_evaluations=10_000,
        )
        d1 = run_details(cfg, "indexed")
        d2 = run_details(cfg, "scan")
        if d1 != d2:
            failures.append(f"engine trajectories diverge for {law}")
    return failures


def _cmd_verify(args: argparse.Namespace) -> int:
    draws = 2 * 10**5 if args.quick else 10**6
    soak = 10**5 if args.quick else 10**6
    suites = [
        ("brute-force front equivalence", _verify_front_equivalence),
        ("sampler chi-square", lambda: _verify_samplers(draws)),
        ("truncated moments", _verify_truncated_moments),
        ("invariant soak", lambda: _verify_invariant_soak(soak)),
        ("engine agreement", _verify_engine_agreement),
    ]
    failed = False
    for name, fn in suites:
        failures = fn()
        if failures:
            failed = True
            print(f"FAIL {name}")
            for msg in failures:
                print(f"  {msg}")
        else:
            print(f"ok {name}")
    return 1 if failed else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "run":
        return _cmd_run(parser, args)
    if args.command == "scenario1":
        return _cmd_scenario(args, 1)
    if args.command == "scenario2":
        return _cmd_scenario(args, 2)
    if args.command == "bounds":
        return _cmd_bounds(parser, args)
    if args.command == "verify":
        return _cmd_verify(args)
    parser.error(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
