"""Command-line interface: ``gen``, ``search``, ``topk``, ``verify``, ``bench``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
import time
from io import StringIO

import numpy as np

from .baselines import exact_s, greedy_backtracking, spring
from .cma import cma_search
from .core import make_trajectory
from .costs import parse_model
from .exceptions import BudgetExceeded, NonPositiveEpsilon, SubtrajError, WrongFamily
from .io import Clustered, GeneratorSpec, RandomWalk, generate, load_csv, save_csv
from .oracle import brute_force_all, quality_metrics
from .pruning import ESTIMATED, SAFE, PruneConfig, top_k_search

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BUDGET = 0, 2, 3, 4

ALGOS = {"cma": cma_search, "exacts": exact_s, "spring": spring, "gb": greedy_backtracking}


class UsageError(Exception):
    pass


def _model(text):
    try:
        return parse_model(text)
    except (ValueError, NonPositiveEpsilon) as exc:
        raise UsageError(str(exc)) from None


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_query(args):
    ds = load_csv(args.query)
    if args.query_id is None:
        return ds[0]
    try:
        return ds.by_id(args.query_id)
    except KeyError:
        raise UsageError(f"no trajectory {args.query_id!r} in {args.query}") from None


def _config(args):
    try:
        return PruneConfig(
            mu=args.mu,
            rate=args.kpf_rate,
            kpf_mode=args.kpf_mode,
            enable_gbp=args.gbp,
            enable_kpf=not args.no_kpf,
            grid_eps=args.grid_eps,
        )
    except (ValueError, NonPositiveEpsilon) as exc:
        raise UsageError(str(exc)) from None


def _threads(args):
    return args.threads if args.threads else (os.cpu_count() or 1)


def _search_report(args, k):
    data = load_csv(args.data)
    query = _load_query(args)
    model = _model(args.model)
    config = _config(args)
    t0 = time.perf_counter()
    results, stats = top_k_search(
        query, data.trajectories, model, k, config,
        algo=ALGOS[args.algo], threads=_threads(args), return_stats=True,
    )
    wall = (time.perf_counter() - t0) * 1000.0
    report = {"query_id": query.id}
    if k == 1 and not args.topk:
        report["best"] = results[0].as_dict() if results else None
    else:
        report["results"] = [r.as_dict() for r in results]
    report["pruning"] = stats.as_dict()
    report["wall_ms"] = wall
    return report


def cmd_search(args):
    k = args.topk or 1
    _emit(json.dumps(_search_report(args, k), indent=2) + "\n", args.out)


def cmd_topk(args):
    args.topk = args.k
    _emit(json.dumps(_search_report(args, args.k), indent=2) + "\n", args.out)


def cmd_verify(args):
    data = load_csv(args.data)
    query = _load_query(args)
    model = _model(args.model)
    algo = ALGOS[args.algo]
    rows = []
    for traj in data.trajectories[: args.limit]:
        truth = brute_force_all(query, traj, model, budget=args.budget)
        q = quality_metrics(algo(query, traj, model), truth)
        rows.append((traj.id, q.ar, q.mr, q.rr))
    buf = StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["data_id", "ar", "mr", "rr"])
    w.writerows(rows)
    _emit(buf.getvalue(), args.out)


def _random_traj(rng, tid, n):
    return make_trajectory(tid, np.cumsum(rng.normal(0.0, 1.0, (n, 2)), axis=0))


def cmd_bench(args):
    rng = np.random.default_rng(args.seed)
    models = [_model(s) for s in args.model]
    buf = StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algo", "model", "m", "n", "mean_ms", "stddev_ms"])
    query = _random_traj(rng, "q", args.m)
    for n in args.n:
        data = _random_traj(rng, "d", n)
        for model in models:
            for name in args.algo:
                algo = ALGOS[name]
                try:
                    algo(query, data.sub(1, min(n, 8)), model)  # compile / warm up
                except WrongFamily:
                    continue
                times = []
                for _ in range(args.repeats):
                    t0 = time.perf_counter()
                    algo(query, data, model)
                    times.append((time.perf_counter() - t0) * 1000.0)
                sd = statistics.stdev(times) if len(times) > 1 else 0.0
                w.writerow([name, model.spec(), args.m, n, f"{statistics.fmean(times):.4f}", f"{sd:.4f}"])
    _emit(buf.getvalue(), args.out)


def cmd_gen(args):
    if args.clustered is not None:
        model = Clustered(centers=args.clustered, spread=args.spread)
    else:
        model = RandomWalk(sigma=args.sigma)
    try:
        spec = GeneratorSpec(
            seed=args.seed, count=args.count, length=(args.min_len, args.max_len),
            model=model, bbox=tuple(args.bbox),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    save_csv(generate(spec), args.out)


def _add_search_args(p):
    p.add_argument("--data", required=True, help="database CSV")
    p.add_argument("--query", required=True, help="CSV holding the query trajectory")
    p.add_argument("--query-id", help="query trajectory id (default: first in file)")
    p.add_argument("--model", default="dtw", help="dtw | frechet | edr:eps=V | erp:cx=V,cy=V | wed:unit")
    p.add_argument("--algo", choices=sorted(ALGOS), default="cma")
    p.add_argument("--mu", type=float, default=0.4)
    p.add_argument("--grid-eps", type=float, default=0.8e-4)
    p.add_argument("--kpf-rate", type=float, default=0.05)
    p.add_argument("--kpf-mode", choices=[SAFE, ESTIMATED], default=SAFE)
    gbp = p.add_mutually_exclusive_group()
    gbp.add_argument("--gbp", dest="gbp", action="store_true", help="enable grid pruning (inexact)")
    gbp.add_argument("--no-gbp", dest="gbp", action="store_false", help="disable grid pruning (default)")
    p.set_defaults(gbp=False)
    p.add_argument("--no-kpf", action="store_true")
    p.add_argument("--threads", type=int, default=0, help="worker threads (default: all cores)")
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="subtraj", description="Exact most-similar subtrajectory search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("search", help="best subtrajectory across a database")
    _add_search_args(p)
    p.add_argument("--topk", type=int, default=0, metavar="K", help="return the K best instead")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("topk", help="K best per-trajectory results")
    _add_search_args(p)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_topk)

    p = sub.add_parser("verify", help="AR/MR/RR against brute force, one row per data trajectory")
    p.add_argument("--data", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--query-id")
    p.add_argument("--model", default="dtw")
    p.add_argument("--algo", choices=sorted(ALGOS), default="cma")
    p.add_argument("--limit", type=int, default=None, help="check only the first N trajectories")
    p.add_argument("--budget", type=int, default=None, help="max ranges per trajectory")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="timing sweep over n at fixed m")
    p.add_argument("--m", type=int, default=32)
    p.add_argument("--n", type=int, nargs="+", default=[1000, 2000, 4000])
    p.add_argument("--algo", nargs="+", choices=sorted(ALGOS), default=["cma", "exacts"])
    p.add_argument("--model", nargs="+", default=["dtw"])
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write a synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--min-len", type=int, default=50)
    p.add_argument("--max-len", type=int, default=200)
    p.add_argument("--sigma", type=float, default=1.0, help="random-walk step scale")
    p.add_argument("--clustered", type=int, metavar="CENTERS", help="cluster around CENTERS random centres")
    p.add_argument("--spread", type=float, default=1.0)
    p.add_argument("--bbox", type=float, nargs=4, default=[0.0, 0.0, 100.0, 100.0],
                   metavar=("XMIN", "YMIN", "XMAX", "YMAX"))
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except WrongFamily as exc:
        print(f"subtraj: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"subtraj: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SubtrajError, OSError, ValueError) as exc:
        print(f"subtraj: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
