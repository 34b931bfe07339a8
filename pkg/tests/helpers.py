import numpy as np

from fastrenyi import KernelSpec, build_gram, generate_mixture


def random_gram(n: int, seed: int, d: int = 3, sigma: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return build_gram(rng.standard_normal((n, d)), KernelSpec.gaussian(sigma))


def mixture_gram(n: int, d: int = 10, seed: int = 0, sigma: float = 1.0) -> np.ndarray:
    return build_gram(generate_mixture(n, d, seed), KernelSpec.gaussian(sigma))


def mre(values, exact: float) -> float:
    return float(np.mean(np.abs(np.asarray(values) - exact)) / abs(exact))
