"""Command-line interface.

Exit codes: 0 on success, 2 on a usage error, 1 when an estimator fails
numerically (non-PSD input, collapsed trace estimate, ...).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import bench
from .errors import NumericalError
from .exact import eigen_spectrum
from .kernels import KernelSpec, build_gram, load_csv
from .measures import METHODS, MeasureRequest, estimate_entropy, greedy_feature_selection, mutual_information, \
    total_correlation
from .blocklr import build_block_lowrank
from .sketch import EstimatorConfig, sketch_count

log = logging.getLogger("fastrenyi")


class UsageError(Exception):
    pass


def _bits(value: float) -> str:
    return f"{round(value, 12) + 0.0} bits"


def _kernel(args) -> KernelSpec:
    if args.kernel == "polynomial":
        return KernelSpec.polynomial(r=args.offset, p=args.power)
    return KernelSpec.gaussian(args.sigma)


def _config(args, alpha: float) -> EstimatorConfig:
    s = args.sketches
    if s is None:
        s = sketch_count(args.epsilon, args.delta) if args.epsilon is not None else 100
    kw = {"alpha": alpha, "s": s, "m": args.degree if args.degree is not None else 30, "seed": args.seed,
          "delta": args.delta}
    if args.epsilon is not None:
        kw["eps"] = args.epsilon
    return EstimatorConfig(**kw)


def _use_blr(args) -> bool:
    return args.clusters is not None or args.rank is not None


def _emit(rows: list[dict], args) -> None:
    """Write a list of flat records as CSV or JSON to --output or stdout."""
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        if args.format == "json":
            json.dump(rows, out, indent=1)
            out.write("\n")
        else:
            w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for row in rows:
                w.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in row.items()})
    finally:
        if out is not sys.stdout:
            out.close()


# --- subcommands --------------------------------------------------------------


def cmd_gram(args) -> int:
    x = load_csv(args.data)
    g = build_gram(x, _kernel(args))
    lam = eigen_spectrum(g)
    off = g[~np.eye(len(g), dtype=bool)]
    stats = {
        "n": len(g),
        "trace": float(np.trace(g)),
        "min_offdiag": float(off.min()) if off.size else float("nan"),
        "max_offdiag": float(off.max()) if off.size else float("nan"),
        "lambda_max": float(lam[0]),
        "lambda_min": float(lam[-1]),
        "numerical_rank": int(np.sum(lam > lam[0] * len(g) * np.finfo(float).eps)),
    }
    if args.output:
        np.savetxt(args.output, g, delimiter=",", fmt="%.17g")
    for key, value in stats.items():
        print(f"{key}: {value}")
    return 0


def cmd_entropy(args) -> int:
    x = load_csv(args.data)
    spec = _kernel(args)
    config = _config(args, args.alpha)
    if _use_blr(args):
        op = build_block_lowrank(x, spec, c=args.clusters, k=args.rank, seed=args.seed)
    else:
        op = build_gram(x, spec)
    est = estimate_entropy(op, args.method, config)
    print(_bits(est.value))
    return 0


def _request(args, variables, target=None) -> MeasureRequest:
    return MeasureRequest(
        variables=variables,
        target=target,
        config=_config(args, args.alpha),
        method=args.method,
        kernels=_kernel(args),
        operator="blr" if _use_blr(args) else "dense",
        clusters=args.clusters,
        rank=args.rank,
    )


def cmd_mi(args) -> int:
    req = _request(args, [load_csv(p) for p in args.data], load_csv(args.target))
    print(_bits(mutual_information(req).value))
    return 0


def cmd_tc(args) -> int:
    if len(args.data) < 2:
        raise UsageError("tc needs at least two input files")
    req = _request(args, [load_csv(p) for p in args.data])
    print(_bits(total_correlation(req).value))
    return 0


def cmd_select(args) -> int:
    features = load_csv(args.features)
    labels = load_csv(args.labels)
    if args.count is not None and not 1 <= args.count <= features.shape[1]:
        raise UsageError(f"--count must be in [1, {features.shape[1]}]")
    count = args.count or features.shape[1]
    result = greedy_feature_selection(features, labels, count, method=args.method,
                                      config=_config(args, args.alpha), kernel=_kernel(args))
    rows = [{"rank": i + 1, "feature": j, "mi": v} for i, (j, v) in enumerate(zip(result.order, result.scores))]
    _emit(rows, args)
    return 0


def cmd_bench(args) -> int:
    blocking = [None]
    if _use_blr(args):
        blocking = [(args.clusters, args.rank)]
    s_start, s_stop, s_step = args.s_start, args.s_stop, args.s_step
    if args.sketches is not None:
        s_start = s_stop = args.sketches
    degrees = {m: args.degree for m in ("taylor", "chebyshev", "lanczos")} if args.degree is not None else {}
    data = load_csv(args.data) if args.data else None
    spec = bench.BenchmarkSpec(
        n=args.n, d=args.d, kernel=_kernel(args), alphas=tuple(args.alpha), methods=tuple(args.method),
        s_start=s_start, s_stop=s_stop, s_step=s_step, degrees=degrees, blocking=blocking,
        trials=args.trials, master_seed=args.seed, data=data,
        output=args.output if args.format == "csv" else None,
    )
    records = bench.run_benchmark(spec)
    if args.format == "json":
        if args.output:
            bench.write_json(records, args.output)
        else:
            bench.write_json(records, sys.stdout)
            sys.stdout.write("\n")
    elif not args.output:
        bench.write_csv(records, sys.stdout)
    return 0


# --- parser -------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, alpha_list: bool = False, method_list: bool = False) -> None:
    if alpha_list:
        p.add_argument("--alpha", type=float, nargs="+", default=[2.0], help="entropy orders")
    else:
        p.add_argument("--alpha", type=float, default=2.0, help="entropy order (not 1)")
    methods = sorted(METHODS)
    if method_list:
        p.add_argument("--method", nargs="+", choices=methods, default=["chebyshev"])
    else:
        p.add_argument("--method", choices=methods, default="exact")
    p.add_argument("--sketches", type=int, help="number of probe vectors s")
    p.add_argument("--degree", type=int, help="polynomial degree or Lanczos steps m")
    p.add_argument("--clusters", type=int, help="block low-rank: number of clusters c")
    p.add_argument("--rank", type=int, help="block low-rank: off-diagonal rank k")
    p.add_argument("--kernel", choices=["gaussian", "polynomial"], default="gaussian")
    p.add_argument("--sigma", type=float, default=1.0, help="Gaussian kernel width")
    p.add_argument("--offset", type=float, default=1.0, help="polynomial kernel offset r")
    p.add_argument("--power", type=int, default=2, help="polynomial kernel degree p")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", type=float, default=0.1, help="failure probability")
    p.add_argument("--epsilon", type=float, help="target accuracy; sets --sketches when that is absent")
    p.add_argument("--output", help="output file (default stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fastrenyi", description="Matrix-based Renyi entropy estimators")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gram", help="build a normalized Gram matrix and print its statistics")
    p.add_argument("data")
    _common(p)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("entropy", help="entropy of one sample file")
    p.add_argument("data")
    _common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("mi", help="mutual information between variables and a target")
    p.add_argument("data", nargs="+")
    p.add_argument("--target", required=True)
    _common(p)
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("tc", help="total correlation of two or more variables")
    p.add_argument("data", nargs="+")
    _common(p)
    p.set_defaults(func=cmd_tc)

    p = sub.add_parser("select", help="greedy mutual-information feature ranking")
    p.add_argument("features")
    p.add_argument("labels")
    p.add_argument("--count", type=int, help="number of features to select (default all)")
    _common(p)
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("bench", help="relative-error benchmark against the eigendecomposition")
    p.add_argument("--data", help="sample CSV; default is a synthetic Gaussian mixture")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--s-start", type=int, default=20)
    p.add_argument("--s-stop", type=int, default=200)
    p.add_argument("--s-step", type=int, default=20)
    p.add_argument("--trials", type=int, default=100)
    _common(p, alpha_list=True, method_list=True)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
