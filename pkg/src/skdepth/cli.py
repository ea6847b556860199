"""Command line interface: ``skdepth {gen,depth,fit,dc,converge}``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import analysis, counting
from .counting import CountingError
from .exact import BetaSkeletonDepth, halfspace_depth_2d
from .geometry import GeometryError, check_beta, uniform_points
from .io import DataError, read_points, read_results, write_json, write_points, write_results, write_rows
from .reduction import depth_via_counts

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class ExperimentConfig:
    n_data: int
    n_query: int = 0
    bbox: tuple = (-10.0, 10.0, -10.0, 10.0)
    seed: Optional[int] = None
    output_format: str = "csv"

    def __post_init__(self):
        if self.n_data < 2:
            raise UsageError("n_data must be at least 2")
        if self.n_query < 0:
            raise UsageError("n_query must be non-negative")
        xmin, xmax, ymin, ymax = self.bbox
        if not (xmin < xmax and ymin < ymax):
            raise UsageError(f"degenerate bounding box {self.bbox}")


def parse_beta(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "∞"):
        return math.inf
    try:
        return check_beta(float(text))
    except (ValueError, GeometryError):
        raise argparse.ArgumentTypeError(f"beta must be a number >= 1 or 'inf', got {text!r}") from None


def _resolve_seed(seed, test_mode: bool) -> int:
    if seed is not None:
        return seed
    if test_mode:
        raise UsageError("--seed is required in --test-mode")
    seed = time.time_ns() % (2**32)
    print(f"seed: {seed}", file=sys.stderr)
    return seed


# -- commands --------------------------------------------------------------------


def cmd_gen(args) -> int:
    seed = _resolve_seed(args.seed, args.test_mode)
    cfg = ExperimentConfig(args.n_data, args.n_query or 0, tuple(args.bbox), seed)
    if cfg.n_query and not args.queries_out:
        raise UsageError("--n-query needs --queries-out")
    rng = np.random.default_rng(cfg.seed)
    data = uniform_points(cfg.n_data, cfg.bbox, rng)
    write_points(args.out, data)
    if cfg.n_query:
        write_points(args.queries_out, uniform_points(cfg.n_query, cfg.bbox, rng))
    return EXIT_OK


def _depth_fn(args, S):
    if args.kind == "hd":
        if args.method != "exact":
            raise UsageError("halfspace depth only supports --method exact")
        return lambda q: halfspace_depth_2d(q, S)
    if args.beta is None:
        raise UsageError("--kind skd requires --beta")
    if args.method == "exact":
        ev = BetaSkeletonDepth(S, args.beta)
        return ev.depth
    if args.method == "reduction":
        counter = counting.build(S)
    else:
        if args.epsilon is None or args.delta is None:
            raise UsageError("--method approx requires --epsilon and --delta")
        seed = _resolve_seed(args.seed, args.test_mode)
        counter = counting.build(S, counting.SAMPLED, args.epsilon, args.delta, seed)
        if counter.fallback:
            print(
                f"note: required sample {counter.meta['required_sample_size']} >= n={len(S)}; counting exactly",
                file=sys.stderr,
            )
    return lambda q: depth_via_counts(q, S, args.beta, counter)


def cmd_depth(args) -> int:
    S = read_points(args.points)
    Q = read_points(args.queries)
    if S.shape[0] < (1 if args.kind == "hd" else 2):
        raise DataError(f"{args.points}: too few data points ({S.shape[0]})")
    fn = _depth_fn(args, S)

    def run(item):
        idx, q = item
        t0 = time.perf_counter()
        res = fn(q)
        return {
            "index": idx,
            "x": float(q[0]),
            "y": float(q[1]),
            "depth": float(res.value),
            "raw_count": res.raw_count,
            "normalizer": res.normalizer,
            "kind": args.kind,
            "beta": "" if args.kind == "hd" else repr(args.beta),
            "method": args.method,
            "wall_time_s": time.perf_counter() - t0,
        }

    items = list(enumerate(Q))
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            records = list(pool.map(run, items))
    else:
        records = [run(it) for it in items]
    meta = {"points": args.points, "queries": args.queries, "kind": args.kind, "method": args.method}
    write_results(args.out, records, args.format, meta)
    return EXIT_OK


def _aligned(a, b, path_a, path_b):
    if a["x"].size != b["x"].size or not (np.array_equal(a["x"], b["x"]) and np.array_equal(a["y"], b["y"])):
        raise DataError(f"{path_a} and {path_b} are not evaluated on the same query points")


def cmd_fit(args) -> int:
    target = read_results(args.target)
    pred = read_results(args.predictor)
    _aligned(target, pred, args.target, args.predictor)
    u, v = target["depth"], pred["depth"]
    cv_scores = None
    degree = args.degree
    if degree == "auto":
        degree, cv_scores = analysis.select_degree(u, v, seed=args.seed or 0)
    else:
        degree = int(degree)
    try:
        rep = analysis.fit_polynomial(u, v, degree)
    except np.linalg.LinAlgError as exc:
        raise DataError(str(exc)) from None
    out = rep.to_dict()
    out["target"] = args.target
    out["predictor"] = args.predictor
    if cv_scores is not None:
        out["cv_scores"] = {str(k): s for k, s in cv_scores.items()}
    write_json(args.out, out)
    if args.scatter:
        rows = [{"series": "data", "x": a, "y": b} for a, b in zip(v, u)]
        grid = np.linspace(v.min(), v.max(), args.curve_points)
        rows += [{"series": "fit", "x": float(a), "y": float(b)} for a, b in zip(grid, rep.predict(grid))]
        write_rows(args.scatter, ["series", "x", "y"], rows)
    return EXIT_OK


def cmd_dc(args) -> int:
    a = read_results(args.a)
    b = read_results(args.b)
    _aligned(a, b, args.a, args.b)
    if a["depth"].size < 2:
        raise DataError("d_c needs at least two query points")
    report = {
        "d_c": analysis.d_c_depths(a["depth"], b["depth"]),
        "n": int(a["depth"].size),
        "ties_a": analysis.tie_count(a["depth"]),
        "ties_b": analysis.tie_count(b["depth"]),
        "a": args.a,
        "b": args.b,
    }
    write_json(args.out, report)
    return EXIT_OK


def cmd_converge(args) -> int:
    S = read_points(args.points)
    Q = read_points(args.queries)
    if S.shape[0] < 2:
        raise DataError(f"{args.points}: too few data points")
    rows = analysis.convergence_table(Q, S, args.betas)
    fields = ["beta", "mean_depth", "mean_ratio", "mean_abs_ratio_dev", "slope", "intercept", "d_E"]
    write_rows(args.out, fields, [r.to_dict() for r in rows])
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skdepth", description="Halfspace and beta-skeleton depth tools.")
    p.add_argument("--test-mode", action="store_true", help="require explicit seeds")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate uniform random points")
    g.add_argument("--n-data", "--n", dest="n_data", type=int, required=True)
    g.add_argument("--n-query", type=int, default=0)
    g.add_argument("--bbox", type=float, nargs=4, default=[-10.0, 10.0, -10.0, 10.0], metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    g.add_argument("--seed", type=int)
    g.add_argument("--out", "-o", required=True, help="data points CSV")
    g.add_argument("--queries-out", help="query points CSV")
    g.set_defaults(func=cmd_gen)

    d = sub.add_parser("depth", help="evaluate depth of query points")
    d.add_argument("--points", required=True)
    d.add_argument("--queries", required=True)
    d.add_argument("--kind", choices=["hd", "skd"], required=True)
    d.add_argument("--beta", type=parse_beta)
    d.add_argument("--method", choices=["exact", "reduction", "approx"], default="exact")
    d.add_argument("--epsilon", type=float)
    d.add_argument("--delta", type=float)
    d.add_argument("--seed", type=int)
    d.add_argument("--threads", type=int, default=1)
    d.add_argument("--format", choices=["csv", "json"], default="csv")
    d.add_argument("--out", "-o", required=True)
    d.set_defaults(func=cmd_depth)

    f = sub.add_parser("fit", help="fit target depth as a polynomial of predictor depth")
    f.add_argument("target", help="results file of the approximated depth (e.g. halfspace)")
    f.add_argument("predictor", help="results file of the approximating depth (e.g. beta-skeleton)")
    f.add_argument("--degree", default="2", help="polynomial degree or 'auto' for 5-fold selection over 1..3")
    f.add_argument("--seed", type=int, help="fold shuffling seed for --degree auto")
    f.add_argument("--out", "-o", default="-")
    f.add_argument("--scatter", help="CSV of data points and fitted curve samples")
    f.add_argument("--curve-points", type=int, default=200)
    f.set_defaults(func=cmd_fit)

    c = sub.add_parser("dc", help="poset dissimilarity between two results files")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--out", "-o", default="-")
    c.set_defaults(func=cmd_dc)

    v = sub.add_parser("converge", help="convergence of SkD_beta towards SkD_inf")
    v.add_argument("--points", required=True)
    v.add_argument("--queries", required=True)
    v.add_argument("--betas", type=parse_beta, nargs="+", required=True)
    v.add_argument("--out", "-o", required=True)
    v.set_defaults(func=cmd_converge)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    if getattr(args, "degree", "auto") not in ("auto",) and not str(args.degree).isdigit():
        parser.error("--degree must be a positive integer or 'auto'")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"skdepth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, GeometryError, CountingError, OSError) as exc:
        print(f"skdepth: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
