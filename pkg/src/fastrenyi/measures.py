"""Mutual information, total correlation and greedy feature selection.

Every quantity is a signed sum of (joint) entropies, each computed by one of
the backends in :data:`METHODS` on either the dense Gram matrix or its block
low-rank approximation. All entropy terms of one quantity reuse the same
seed, so they see the same probe vectors and their errors partly cancel.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .blocklr import build_block_lowrank
from .exact import exact_entropy
from .kernels import KernelSpec, as_samples, build_gram, hadamard_joint
from .lanczos import lanczos_entropy
from .poly import chebyshev_entropy, taylor_entropy
from .sketch import EntropyEstimate, EstimatorConfig, integer_entropy

__all__ = [
    "METHODS",
    "estimate_entropy",
    "MeasureRequest",
    "joint_entropy",
    "mutual_information",
    "total_correlation",
    "SelectionResult",
    "greedy_feature_selection",
]


def _exact(g, config: EstimatorConfig) -> EntropyEstimate:
    t0 = time.perf_counter()
    if hasattr(g, "to_dense"):
        g = g.to_dense()
    value = exact_entropy(g, config.alpha)
    return EntropyEstimate(value, "exact", config.alpha, elapsed=time.perf_counter() - t0)


METHODS: dict[str, Callable[..., EntropyEstimate]] = {
    "exact": _exact,
    "trace": integer_entropy,
    "taylor": taylor_entropy,
    "chebyshev": chebyshev_entropy,
    "lanczos": lanczos_entropy,
}


def estimate_entropy(g, method: str, config: EstimatorConfig) -> EntropyEstimate:
    """Entropy of a Gram matrix, block low-rank approximation or operator."""
    try:
        fn = METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}") from None
    return fn(g, config)


@dataclass
class MeasureRequest:
    """Inputs for an information measure.

    ``variables`` are sample matrices sharing the row count ``n``. ``kernels``
    is one spec for all variables or one per variable. ``operator="blr"``
    replaces every (joint) Gram matrix by its block low-rank approximation,
    which requires Gaussian kernels.
    """

    variables: list
    target: np.ndarray | None = None
    config: EstimatorConfig = field(default_factory=lambda: EstimatorConfig(alpha=2.0))
    method: str = "exact"
    kernels: KernelSpec | Sequence[KernelSpec] = field(default_factory=KernelSpec)
    target_kernel: KernelSpec | None = None
    operator: str = "dense"
    clusters: int | None = None
    rank: int | None = None

    def __post_init__(self):
        self.variables = [as_samples(v) for v in self.variables]
        if self.target is not None:
            self.target = as_samples(self.target)
        rows = {len(v) for v in self.variables}
        if self.target is not None:
            rows.add(len(self.target))
        if len(rows) > 1:
            raise ValueError(f"variables must share the sample count, got {sorted(rows)}")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.operator not in ("dense", "blr"):
            raise ValueError(f"operator must be 'dense' or 'blr', got {self.operator!r}")
        if isinstance(self.kernels, KernelSpec):
            self.kernels = [self.kernels] * len(self.variables)
        self.kernels = list(self.kernels)
        if len(self.kernels) != len(self.variables):
            raise ValueError("need one kernel per variable")
        if self.target_kernel is None:
            self.target_kernel = self.kernels[0] if self.kernels else KernelSpec()
        if self.operator == "blr" and not all(k.shift_invariant for k in self.kernels + [self.target_kernel]):
            raise ValueError("block low-rank operator needs Gaussian kernels")


def _canonical(pairs):
    # fixes the order of (data, kernel) pairs so results do not depend on list order
    return sorted(pairs, key=lambda p: (p[0].shape, p[1].kind, p[1].sigma, p[1].r, p[1].p, p[0].tobytes()))


def _joint_operand(pairs, req: MeasureRequest):
    pairs = _canonical(pairs)
    if req.operator == "blr":
        # product of Gaussian Grams = Gaussian Gram of the stacked, bandwidth-scaled features
        stacked = np.hstack([x / k.sigma for x, k in pairs])
        return build_block_lowrank(stacked, KernelSpec.gaussian(1.0), c=req.clusters, k=req.rank,
                                   seed=req.config.seed)
    grams = [build_gram(x, k) for x, k in pairs]
    return grams[0] if len(grams) == 1 else hadamard_joint(grams)


def joint_entropy(pairs, req: MeasureRequest) -> EntropyEstimate:
    return estimate_entropy(_joint_operand(pairs, req), req.method, req.config)


def _combine(terms: dict[str, EntropyEstimate], signs: dict[str, int], req: MeasureRequest, name: str):
    value = math.fsum(signs[key] * est.value for key, est in terms.items())
    return EntropyEstimate(
        value,
        req.method,
        req.config.alpha,
        s=None if req.method == "exact" else req.config.s,
        m=None if req.method == "exact" else req.config.m,
        elapsed=sum(est.elapsed for est in terms.values()),
        info={"quantity": name, "operator": req.operator, "terms": {k: e.value for k, e in terms.items()}},
    )


def mutual_information(req: MeasureRequest) -> EntropyEstimate:
    """``S(X_1..X_L) + S(Y) - S(X_1..X_L, Y)``."""
    if req.target is None or not req.variables:
        raise ValueError("mutual information needs at least one variable and a target")
    xs = list(zip(req.variables, req.kernels))
    y = (req.target, req.target_kernel)
    terms = {
        "joint_x": joint_entropy(xs, req),
        "target": joint_entropy([y], req),
        "joint_xy": joint_entropy(xs + [y], req),
    }
    return _combine(terms, {"joint_x": 1, "target": 1, "joint_xy": -1}, req, "mutual_information")


def total_correlation(req: MeasureRequest) -> EntropyEstimate:
    """``sum_i S(X_i) - S(X_1..X_L)``."""
    if len(req.variables) < 2:
        raise ValueError("total correlation needs at least two variables")
    pairs = list(zip(req.variables, req.kernels))
    terms = {f"marginal_{i}": joint_entropy([p], req) for i, p in enumerate(pairs)}
    terms["joint"] = joint_entropy(pairs, req)
    signs = {key: (-1 if key == "joint" else 1) for key in terms}
    return _combine(terms, signs, req, "total_correlation")


@dataclass
class SelectionResult:
    order: list[int]
    scores: list[float]  # mutual information of the selected set after each step


def greedy_feature_selection(features, labels, count: int, method: str = "exact",
                             config: EstimatorConfig | None = None, kernel: KernelSpec | None = None,
                             label_kernel: KernelSpec | None = None) -> SelectionResult:
    """Forward selection maximizing ``I(selected features; labels)``.

    Each feature column gets its own Gram matrix; the selected set enters
    through their Hadamard product. Ties go to the lowest feature index.
    """
    x = as_samples(features)
    y = as_samples(labels)
    if len(x) != len(y):
        raise ValueError("features and labels must have the same number of rows")
    n_feat = x.shape[1]
    if not 1 <= count <= n_feat:
        raise ValueError(f"count must be in [1, {n_feat}]")
    config = config or EstimatorConfig(alpha=2.0)
    kernel = kernel or KernelSpec()
    grams = [build_gram(x[:, j], kernel) for j in range(n_feat)]
    gy = build_gram(y, label_kernel or kernel)
    s_y = estimate_entropy(gy, method, config).value

    def entropy(gs):
        g = gs[0] if len(gs) == 1 else hadamard_joint(gs)
        return estimate_entropy(g, method, config).value

    order: list[int] = []
    scores: list[float] = []
    for _ in range(count):
        best, best_val = -1, -math.inf
        chosen = [grams[i] for i in order]
        for j in range(n_feat):
            if j in order:
                continue
            cand = chosen + [grams[j]]
            val = entropy(cand) + s_y - entropy(cand + [gy])
            if val > best_val:
                best, best_val = j, val
        order.append(best)
        scores.append(best_val)
    return SelectionResult(order, scores)
