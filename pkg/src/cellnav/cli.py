"""Command-line interface.

Exit codes: 0 success, 1 problem infeasible, 2 input error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .bench import (
    BenchConfig,
    instances_to_csv,
    run_benchmark,
    summary_to_csv,
    sweep_snr,
    sweep_to_csv,
)
from .connectivity import build_graph, is_feasible, max_attainable_snr
from .errors import PlannerError, ScenarioFormatError, TooManyPaths, UnattainableSnr
from .planner import plan_optimal, plan_proposed, plan_straight
from .scenario import compute_coverage_radius, load_scenario
from .svg import render_svg
from .trajectory import trajectory_to_csv, waypoints_to_csv

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as f:
            f.write(text)


def _cmd_plan(args) -> int:
    s = load_scenario(args.scenario)
    planners = {
        "proposed": lambda: plan_proposed(s, args.rho_db),
        "optimal": lambda: plan_optimal(s, args.rho_db, max_paths=args.max_paths),
        "straight": lambda: plan_straight(s, args.rho_db),
    }
    result = planners[args.method]()
    d_bar = compute_coverage_radius(s, args.rho_db)
    if args.svg:
        _write(args.svg, render_svg(s, [result], d_bar))
    if result.status == "infeasible":
        print(f"infeasible at rho={args.rho_db} dB (d_bar={float(d_bar):.3f} m)")
        return EXIT_INFEASIBLE
    print(
        f"method={result.method} T={result.total_time:.3f} s "
        f"path={result.path_length:.3f} m "
        f"sequence={result.sequence.serialize() if result.sequence else '-'}"
    )
    if args.waypoints:
        _write(args.waypoints, waypoints_to_csv(result.trajectory))
    if args.trajectory:
        _write(args.trajectory, trajectory_to_csv(s, result.trajectory, args.dt))
    return EXIT_OK


def _cmd_feasible(args) -> int:
    s = load_scenario(args.scenario)
    rho_max, crit = max_attainable_snr(s)
    print(f"rho_max={rho_max:.6f} dB critical_d_bar={crit:.6f} m")
    if args.rho_db is None:
        return EXIT_OK
    d_bar = compute_coverage_radius(s, args.rho_db)
    graph = build_graph(s, d_bar)
    feasible = is_feasible(graph)
    print(f"rho={args.rho_db} dB d_bar={float(d_bar):.6f} m feasible={feasible}")
    if args.graph_csv:
        _write(args.graph_csv, graph.to_edge_csv())
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def _cmd_sweep(args) -> int:
    s = load_scenario(args.scenario)
    grid = np.linspace(args.rho_min, args.rho_max, args.steps)
    rows = sweep_snr(s, grid, max_paths=args.max_paths)
    _write(args.out, sweep_to_csv(rows))
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.m > 12 and not args.force:
        print(
            f"refusing M={args.m}: exhaustive search may enumerate a huge number of "
            "paths (pass --force to override)",
            file=sys.stderr,
        )
        return EXIT_INPUT
    cfg = BenchConfig(
        instance_count=args.instances,
        m=args.m,
        region_width=args.region,
        region_height=args.region,
        rng_seed=args.seed,
        max_paths=args.max_paths,
        fixed_rho_db=args.rho_db,
    )
    summary = run_benchmark(cfg)
    _write(args.out_summary, summary_to_csv(summary))
    if args.out_instances:
        _write(args.out_instances, instances_to_csv(summary))
    mean = summary.mean_gap_percent
    print(
        f"instances={summary.instance_count} seed={summary.rng_seed} "
        f"mean_gap={mean:.4f}% max_gap={summary.max_gap_percent:.4f}% "
        f"infeasible={summary.infeasible_count} errors={summary.error_count}"
        if math.isfinite(mean)
        else f"instances={summary.instance_count} seed={summary.rng_seed} no feasible instances"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cellnav",
        description="Minimum-time UAV trajectory planning under a cellular-connectivity constraint",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    plan = sub.add_parser("plan", help="plan a single mission", formatter_class=fmt)
    plan.add_argument("scenario", help="scenario JSON file")
    plan.add_argument("--rho-db", type=float, required=True, help="SNR target in dB")
    plan.add_argument(
        "--method", choices=("proposed", "optimal", "straight"), default="proposed"
    )
    plan.add_argument("--waypoints", default=None, help="waypoint CSV output path ('-' for stdout)")
    plan.add_argument("--trajectory", default=None, help="sampled trajectory CSV output path")
    plan.add_argument("--dt", type=float, default=1.0, help="trajectory CSV sample interval (s)")
    plan.add_argument("--svg", default=None, help="SVG output path")
    plan.add_argument("--max-paths", type=int, default=10**7, help="enumeration cap for --method optimal")
    plan.set_defaults(func=_cmd_plan)

    feas = sub.add_parser(
        "feasible", help="report the maximum attainable SNR target", formatter_class=fmt
    )
    feas.add_argument("scenario", help="scenario JSON file")
    feas.add_argument("--rho-db", type=float, default=None, help="also check feasibility at this target")
    feas.add_argument("--graph-csv", default=None, help="dump the coverage graph edge list")
    feas.set_defaults(func=_cmd_feasible)

    sweep = sub.add_parser("sweep", help="mission time vs SNR target table", formatter_class=fmt)
    sweep.add_argument("scenario", help="scenario JSON file")
    sweep.add_argument("--rho-min", type=float, required=True)
    sweep.add_argument("--rho-max", type=float, required=True)
    sweep.add_argument("--steps", type=int, default=20)
    sweep.add_argument("--max-paths", type=int, default=10**7)
    sweep.add_argument("--out", default="-", help="CSV output path ('-' for stdout)")
    sweep.set_defaults(func=_cmd_sweep)

    bench = sub.add_parser("bench", help="seeded proposed-vs-optimal gap study", formatter_class=fmt)
    bench.add_argument("--instances", type=int, default=100)
    bench.add_argument("--m", type=int, default=11, help="GBS count per instance")
    bench.add_argument("--region", type=float, default=10_000.0, help="square region side (m)")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--rho-db", type=float, default=None,
                       help="fixed SNR target; default uses each instance's maximum attainable")
    bench.add_argument("--max-paths", type=int, default=10**7)
    bench.add_argument("--force", action="store_true", help="allow M > 12")
    bench.add_argument("--out-summary", default="-", help="summary CSV path ('-' for stdout)")
    bench.add_argument("--out-instances", default=None, help="per-instance CSV path")
    bench.set_defaults(func=_cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioFormatError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except TooManyPaths as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except UnattainableSnr as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except PlannerError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
