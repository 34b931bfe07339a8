"""MRE as a function of alpha at fixed s and m, on both sides of alpha = 1."""

import argparse
import logging

from scipy.stats import spearmanr

from fastrenyi.bench import BenchmarkSpec, run_benchmark
from fastrenyi.kernels import KernelSpec

from _common import summarize


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.2, 0.4, 0.6, 0.8, 1.2, 1.5, 2.0, 2.5, 3.0])
    p.add_argument("--sketches", type=int, default=100)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    spec = BenchmarkSpec(n=args.n, d=args.d, kernel=KernelSpec.gaussian(1.0), alphas=tuple(args.alpha),
                         methods=("taylor", "chebyshev", "lanczos"), s_start=args.sketches,
                         s_stop=args.sketches, trials=args.trials, master_seed=args.seed, output=args.output)
    table = summarize(run_benchmark(spec), keys=("method", "alpha"))
    for method in ("taylor", "chebyshev", "lanczos"):
        for side, pick in (("alpha<1", lambda a: a < 1), ("alpha>1", lambda a: a > 1)):
            rows = [(key[1], mre) for key, mre, _, _ in table if key[0] == method and pick(key[1])]
            if len(rows) > 1:
                a, m = zip(*rows)
                print(f"{method:9s} {side}: spearman(alpha, MRE) = {spearmanr(a, m)[0]:+.3f}")


if __name__ == "__main__":
    main()
