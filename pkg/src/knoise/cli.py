"""Command-line harness: sample emission, mechanisms, and the benchmark grid.

Subcommands
-----------
sample     Emit uniform ball samples, one comma-separated point per line.
bench      Error-ratio comparison grid against the best enclosing lp ball
           (mode knorm, Monte Carlo) or the minimum enclosing sphere
           (mode ellipse, closed forms), written as CSV.
mechanism  Privatize a statistic read from a file.

Every command takes ``--seed``; outputs are byte-identical across runs with
the same arguments. Bench rows draw from substreams seeded by
(seed, row_index, stream_role), so any subset of rows reproduces
independently and serial and parallel execution agree. A ``--config`` file
with flat key=value lines may supply any long option; explicit flags win.

Exit codes: 0 success, 2 invalid arguments, 3 runtime failure.
"""

import argparse
import csv
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import baselines, mechanisms
from .count_ball import CountBall
from .sum_ball import SumBall
from .vote_ball import VoteBall

P_GRID = (1.0, 1.5, 2.0, 4.0, 8.0, math.inf)

_CONFIG_KEYS = (
    "problem",
    "mode",
    "d",
    "k",
    "n",
    "trials",
    "seed",
    "out",
    "jobs",
    "epsilon",
    "rho",
    "statistic",
)


def _fmt(x):
    return repr(float(x))


def _fmt_p(p):
    return "inf" if math.isinf(p) else f"{p:g}"


def _parse_int_list(text):
    """Parses '2,5,8' and range syntax '2:49' (inclusive), possibly mixed."""
    values = []
    for part in str(text).split(","):
        part = part.strip()
        if ":" in part:
            lo, hi = part.split(":")
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty integer list: {text!r}")
    return values


def _parse_scalar_int(text, name):
    values = _parse_int_list(text)
    if len(values) != 1:
        raise ValueError(f"{name} must be a single integer here, got {text!r}")
    return values[0]


def make_ball(problem, d, k):
    if problem == "sum":
        return SumBall(d, k if k is not None else d)
    if problem == "count":
        return CountBall(d, k if k is not None else d)
    if problem == "vote":
        return VoteBall(d)
    raise ValueError(f"unknown problem {problem!r}")


def cmd_sample(args):
    d = _parse_scalar_int(args.d, "--d")
    k = _parse_scalar_int(args.k, "--k") if args.k is not None else None
    ball = make_ball(args.problem, d, k)
    rng = np.random.default_rng(args.seed)
    points = ball.sample(args.n, rng)
    lines = [",".join(_fmt(v) for v in row) for row in points]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _default_grid(problem, mode):
    """Benchmark grid matching the published comparison sweeps."""
    if mode == "knorm":
        if problem == "sum":
            return [50], list(range(2, 49))
        if problem == "count":
            return [50], list(range(2, 50))
        return list(range(5, 51)), [None]
    if problem == "count":
        return [1000], list(range(2, 501))
    if problem == "vote":
        return list(range(3, 1001)), [None]
    raise ValueError(
        "sum has no ellipse mode: its ball is orthant-symmetric, so spherical "
        "Gaussian noise is already optimal"
    )


def _bench_rows(problems, mode, d_arg, k_arg):
    rows = []
    for problem in problems:
        d_values, k_values = _default_grid(problem, mode)
        if d_arg is not None:
            d_values = _parse_int_list(d_arg)
        if k_arg is not None:
            k_values = [None] if problem == "vote" else _parse_int_list(k_arg)
        for d in d_values:
            for k in k_values:
                if k is not None and k > d:
                    raise ValueError(f"k must be <= d, got k={k}, d={d}")
                rows.append((problem, d, k))
    return rows


def _knorm_row(problem, d, k, trials, seed, row_index):
    ball = make_ball(problem, d, k)
    rng = np.random.default_rng([seed, row_index, 0])
    ours = float(np.mean(np.sum(ball.sample(trials, rng) ** 2, axis=1)))
    baseline_mses = []
    for role, p in enumerate(P_GRID, start=1):
        rng_p = np.random.default_rng([seed, row_index, role])
        radius = ball.enclosing_radius(p)
        y = baselines.sample_lp_ball(d, p, rng_p, radius=radius, size=trials)
        baseline_mses.append(float(np.mean(np.sum(y**2, axis=1))))
    best = int(np.argmin(baseline_mses))
    return {
        "best_lp_p": _fmt_p(P_GRID[best]),
        "ours_mse": ours,
        "baseline_mse": baseline_mses[best],
        "ratio": ours / baseline_mses[best],
    }


def _ellipse_row(problem, d, k):
    ball = make_ball(problem, d, k)
    radius = ball.enclosing_radius(2.0)
    baseline = mechanisms.sphere_expected_sq_norm(d, radius)
    if problem == "count":
        if 2 * k > d:
            return None
        ellipse = mechanisms.count_min_ellipse(d, k)
    else:
        ellipse = mechanisms.vote_min_ellipse(d)
    ours = mechanisms.ellipse_expected_sq_norm(ellipse)
    return {
        "best_lp_p": "2",
        "ours_mse": ours,
        "baseline_mse": baseline,
        "ratio": ours / baseline,
    }


def _bench_one(task):
    mode, problem, d, k, trials, seed, row_index = task
    if mode == "knorm":
        result = _knorm_row(problem, d, k, trials, seed, row_index)
    else:
        result = _ellipse_row(problem, d, k)
    record = {
        "problem": problem,
        "mode": mode,
        "d": str(d),
        "k": "" if k is None else str(k),
    }
    if result is None:
        record.update(
            {"best_lp_p": "2", "ours_mse": "", "baseline_mse": "", "ratio": "skipped"}
        )
    else:
        record.update(
            {
                "best_lp_p": result["best_lp_p"],
                "ours_mse": _fmt(result["ours_mse"]),
                "baseline_mse": _fmt(result["baseline_mse"]),
                "ratio": _fmt(result["ratio"]),
            }
        )
    return record


def cmd_bench(args):
    problems = ["sum", "count", "vote"] if args.problem == "all" else [args.problem]
    if args.mode == "ellipse" and args.problem == "all":
        problems = ["count", "vote"]
    rows = _bench_rows(problems, args.mode, args.d, args.k)
    tasks = [
        (args.mode, problem, d, k, args.trials, args.seed, i)
        for i, (problem, d, k) in enumerate(rows)
    ]
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            records = list(pool.map(_bench_one, tasks))
    else:
        records = [_bench_one(t) for t in tasks]
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=[
                "problem",
                "mode",
                "d",
                "k",
                "best_lp_p",
                "ours_mse",
                "baseline_mse",
                "ratio",
            ],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(records)
    return 0


def _read_statistic(path, d):
    with open(path) as fh:
        text = fh.read()
    values = [float(v) for v in text.replace(",", " ").split()]
    if len(values) != d:
        raise ValueError(f"statistic file holds {len(values)} values, expected {d}")
    return np.array(values)


def cmd_mechanism(args):
    d = _parse_scalar_int(args.d, "--d")
    k = _parse_scalar_int(args.k, "--k") if args.k is not None else None
    statistic = _read_statistic(args.statistic, d)
    rng = np.random.default_rng(args.seed)
    if args.mode == "knorm":
        if args.epsilon is None:
            raise ValueError("mode knorm requires --epsilon")
        ball = make_ball(args.problem, d, k)
        mech = mechanisms.KNormMechanism(ball, args.epsilon)
    else:
        if args.rho is None:
            raise ValueError("mode ellipse requires --rho")
        if args.problem == "count":
            if k is None:
                raise ValueError("count requires --k")
            ellipse = mechanisms.count_min_ellipse(d, k)
        elif args.problem == "vote":
            ellipse = mechanisms.vote_min_ellipse(d)
        else:
            raise ValueError(
                "sum has no ellipse mode; use mode knorm or a spherical Gaussian"
            )
        mech = mechanisms.EllipticGaussianMechanism(ellipse, args.rho)
    out = mech.randomize(statistic, rng)
    sys.stdout.write(",".join(_fmt(v) for v in out) + "\n")
    return 0


def _load_config(path):
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line is not key=value: {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = value.strip()
    return values


_CONFIG_CONVERTERS = {
    "n": int,
    "trials": int,
    "seed": int,
    "jobs": int,
    "epsilon": float,
    "rho": float,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="knoise",
        description="Samplers and noise mechanisms for sum/count/vote balls.",
        epilog=(
            "bench compares against the best lp ball over p in "
            "{1, 1.5, 2, 4, 8, inf} (knorm mode) or the minimum enclosing "
            "sphere (ellipse mode). --d/--k accept comma lists and lo:hi "
            "ranges; defaults reproduce the published sweeps."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    problems = ("sum", "count", "vote")

    def common(p):
        p.add_argument("--seed", type=int, help="root RNG seed (default 0)")
        p.add_argument("--config", help="key=value file supplying defaults")

    p_sample = sub.add_parser("sample", help="emit uniform ball samples")
    p_sample.add_argument("--problem", choices=problems)
    p_sample.add_argument("--d", help="dimension")
    p_sample.add_argument("--k", help="contribution bound (sum/count)")
    p_sample.add_argument("--n", type=int, help="number of samples (default 1)")
    p_sample.add_argument("--out", help="output path (default stdout)")
    common(p_sample)
    p_sample.set_defaults(func=cmd_sample)

    p_bench = sub.add_parser("bench", help="error-ratio benchmark CSV")
    p_bench.add_argument("--problem", choices=problems + ("all",))
    p_bench.add_argument("--mode", choices=("knorm", "ellipse"))
    p_bench.add_argument("--d", help="dimension list, e.g. 50 or 5:50")
    p_bench.add_argument("--k", help="contribution bound list, e.g. 2:49")
    p_bench.add_argument("--trials", type=int, help="trials per row (default 1000)")
    p_bench.add_argument("--out", help="CSV output path")
    p_bench.add_argument("--jobs", type=int, help="parallel row workers (default 1)")
    common(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_mech = sub.add_parser("mechanism", help="privatize a statistic from a file")
    p_mech.add_argument("--problem", choices=problems)
    p_mech.add_argument("--mode", choices=("knorm", "ellipse"))
    p_mech.add_argument("--d", help="dimension")
    p_mech.add_argument("--k", help="contribution bound (sum/count)")
    p_mech.add_argument("--epsilon", type=float, help="pure-DP parameter")
    p_mech.add_argument("--rho", type=float, help="concentrated-DP parameter")
    p_mech.add_argument("--statistic", help="file of d comma-separated reals")
    common(p_mech)
    p_mech.set_defaults(func=cmd_mechanism)
    return parser


_POST_CONFIG_DEFAULTS = {
    "seed": 0,
    "n": 1,
    "trials": 1000,
    "jobs": 1,
}


def _apply_config(args):
    if getattr(args, "config", None):
        for key, raw in _load_config(args.config).items():
            if hasattr(args, key) and getattr(args, key) is None:
                convert = _CONFIG_CONVERTERS.get(key, str)
                setattr(args, key, convert(raw))
    for key, default in _POST_CONFIG_DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, default)
    if args.command == "bench" and args.problem is None:
        args.problem = "all"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        _apply_config(args)
        _validate_required(args)
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 3
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


def _validate_required(args):
    if args.command in ("sample", "mechanism") and args.problem is None:
        raise ValueError("--problem is required (flag or config)")
    if args.command in ("sample", "mechanism") and args.d is None:
        raise ValueError("--d is required (flag or config)")
    if args.command in ("sample", "mechanism") and args.problem in ("sum", "count"):
        if args.k is None:
            raise ValueError(f"problem {args.problem} requires --k")
    if args.command == "mechanism" and args.statistic is None:
        raise ValueError("--statistic is required (flag or config)")
    if args.command in ("bench", "mechanism") and args.mode is None:
        raise ValueError("--mode is required (flag or config)")
    if args.command == "bench" and args.out is None:
        raise ValueError("--out is required (flag or config)")
    if getattr(args, "trials", 1) < 1:
        raise ValueError("--trials must be >= 1")
    if getattr(args, "n", 1) < 1:
        raise ValueError("--n must be >= 1")
    if getattr(args, "jobs", 1) < 1:
        raise ValueError("--jobs must be >= 1")


if __name__ == "__main__":
    sys.exit(main())
