"""Fractional alpha: Taylor, Chebyshev and Lanczos MRE over a probe-count sweep.

    python3 scripts/fractional_alpha.py --alpha 0.5 1.5 2.5 --trials 100
"""

import argparse
import logging

from fastrenyi.bench import BenchmarkSpec, run_benchmark
from fastrenyi.kernels import KernelSpec

from _common import summarize


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--d", type=int, default=10)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--alpha", type=float, nargs="+", default=[0.5, 1.5, 2.5])
    p.add_argument("--s-start", type=int, default=20)
    p.add_argument("--s-stop", type=int, default=200)
    p.add_argument("--s-step", type=int, default=20)
    p.add_argument("--poly-degree", type=int, default=30, help="Taylor/Chebyshev degree")
    p.add_argument("--lanczos-steps", type=int, default=15)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    spec = BenchmarkSpec(n=args.n, d=args.d, kernel=KernelSpec.gaussian(args.sigma), alphas=tuple(args.alpha),
                         methods=("taylor", "chebyshev", "lanczos"), s_start=args.s_start, s_stop=args.s_stop,
                         s_step=args.s_step, trials=args.trials, master_seed=args.seed, output=args.output,
                         degrees={"taylor": args.poly_degree, "chebyshev": args.poly_degree,
                                  "lanczos": args.lanczos_steps})
    summarize(run_benchmark(spec))


if __name__ == "__main__":
    main()
