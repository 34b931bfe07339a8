"""Fractional-alpha estimators on a rank-deficient polynomial-kernel Gram matrix.

Degree-p polynomial features of d-dimensional data span at most C(d+p, p)
dimensions, so d is chosen to leave a few percent of eigenvalues at zero.
"""

import argparse
import logging

import numpy as np

from fastrenyi.bench import BenchmarkSpec, generate_mixture, run_benchmark
from fastrenyi.exact import eigen_spectrum
from fastrenyi.kernels import KernelSpec, build_gram

from _common import summarize


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--d", type=int, default=42)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.5])
    p.add_argument("--sketches", type=int, default=100)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    data = generate_mixture(args.n, args.d, args.seed)
    kernel = KernelSpec.polynomial(r=1.0, p=2)
    lam = eigen_spectrum(build_gram(data, kernel))
    print(f"zero eigenvalues: {np.mean(lam == 0):.1%}")
    spec = BenchmarkSpec(n=args.n, d=args.d, kernel=kernel, alphas=tuple(args.alpha),
                         methods=("taylor", "chebyshev", "lanczos"), s_start=args.sketches,
                         s_stop=args.sketches, trials=args.trials, master_seed=args.seed, data=data,
                         output=args.output)
    summarize(run_benchmark(spec), keys=("method", "alpha"))


if __name__ == "__main__":
    main()
