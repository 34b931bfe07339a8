"""MRE and time vs. number of probes for integer alpha (trace estimator).

    python3 scripts/integer_alpha.py --n 2000 --trials 100 --output integer.csv
"""

import argparse
import logging

import numpy as np
from scipy.stats import spearmanr

from fastrenyi.bench import BenchmarkSpec, run_benchmark
from fastrenyi.blocklr import default_blocking
from fastrenyi.kernels import KernelSpec

from _common import summarize


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, nargs="+", default=[2, 3, 5, 8])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lowrank", action="store_true", help="also run on the block low-rank approximation")
    p.add_argument("--output")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    blocking = [None, default_blocking(args.n)] if args.lowrank else [None]
    spec = BenchmarkSpec(n=args.n, d=args.d, kernel=KernelSpec.gaussian(args.sigma), alphas=tuple(args.alpha),
                         methods=("trace",), s_start=20, s_stop=200, s_step=20, trials=args.trials,
                         blocking=tuple(blocking), master_seed=args.seed, output=args.output)
    table = summarize(run_benchmark(spec))
    for alpha in args.alpha:
        rows = [(key[2], mre) for key, mre, _, _ in table if key[1] == alpha and key[3] is None]
        s, m = zip(*rows)
        print(f"alpha={alpha}: spearman(s, MRE) = {spearmanr(s, m)[0]:+.3f}")


if __name__ == "__main__":
    main()
