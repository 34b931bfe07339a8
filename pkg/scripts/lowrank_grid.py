"""Chebyshev entropy on block low-rank approximations over a (c, k) grid.

Compares each grid point with the dense operator; the default point
(c ~ n^(1/4), k ~ sqrt(n)) is expected to stay within 2x of the dense MRE.
"""

import argparse
import logging

from fastrenyi.bench import BenchmarkSpec, run_benchmark
from fastrenyi.blocklr import default_blocking
from fastrenyi.kernels import KernelSpec

from _common import summarize


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--alpha", type=float, default=2.5)
    p.add_argument("--clusters", type=int, nargs="+", default=[2, 4, 6, 8, 10, 12, 14, 16, 18, 20])
    p.add_argument("--ranks", type=int, nargs="+", default=[10, 20, 30, 40, 50, 60, 70, 80, 90, 100])
    p.add_argument("--sketches", type=int, default=100)
    p.add_argument("--degree", type=int, default=40)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    default = default_blocking(args.n)
    grid = [None, default] + [(c, k) for c in args.clusters for k in args.ranks]
    spec = BenchmarkSpec(n=args.n, d=args.d, kernel=KernelSpec.gaussian(1.0), alphas=(args.alpha,),
                         methods=("chebyshev",), s_start=args.sketches, s_stop=args.sketches,
                         degrees={"chebyshev": args.degree}, blocking=tuple(dict.fromkeys(grid)),
                         trials=args.trials, master_seed=args.seed, output=args.output)
    table = summarize(run_benchmark(spec), keys=("c", "k"))
    dense = next(mre for key, mre, _, _ in table if key == (None, None))
    at_default = next(mre for key, mre, _, _ in table if key == default)
    print(f"default (c, k) = {default}: MRE {at_default:.3e} vs dense {dense:.3e} "
          f"(ratio {at_default / dense:.2f})")


if __name__ == "__main__":
    main()
