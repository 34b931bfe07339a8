"""Seeded sketches, Hutchinson trace estimation and power iteration.

Everything in this package touches a Gram matrix only through a
:class:`SpectralOperator`, i.e. a function that applies the matrix to a
vector or to a block of column vectors.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import CollapsedEstimateError, NumericalError
from .exact import check_alpha

__all__ = [
    "SpectralOperator",
    "as_operator",
    "SketchBatch",
    "sample_sketch",
    "EstimatorConfig",
    "EntropyEstimate",
    "sketch_count",
    "quadratic_forms",
    "hutchinson_trace",
    "power_iteration",
    "entropy_from_trace",
    "integer_entropy",
]

# stream keys >= this are reserved for power iteration starts; sketch columns use 0, 1, 2, ...
_POWER_STREAM = 2**40


@dataclass(frozen=True)
class SpectralOperator:
    """Symmetric linear map ``v -> G v``; ``apply`` must accept shape (n,) and (n, s)."""

    n: int
    apply: Callable[[np.ndarray], np.ndarray]

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.apply(v)


def as_operator(obj) -> SpectralOperator:
    if isinstance(obj, SpectralOperator):
        return obj
    if hasattr(obj, "as_operator"):
        return obj.as_operator()
    a = np.asarray(obj, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return SpectralOperator(a.shape[0], a.__matmul__)


@dataclass(frozen=True)
class SketchBatch:
    vectors: np.ndarray  # (n, s), one probe per column
    distribution: str
    seed: int

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def s(self) -> int:
        return self.vectors.shape[1]


def _stream(seed: int, key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(key)]))


def sample_sketch(n: int, s: int, distribution: str = "gaussian", seed: int = 0) -> SketchBatch:
    """Draw ``s`` probe vectors of length ``n``.

    Column ``i`` comes from its own stream keyed by ``(seed, i)``, so the
    first ``s`` columns do not depend on how many columns are requested.
    """
    if n < 1 or s < 1:
        raise ValueError("n and s must be positive")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    out = np.empty((n, s))
    for i in range(s):
        rng = _stream(seed, i)
        if distribution == "gaussian":
            out[:, i] = rng.standard_normal(n)
        elif distribution == "rademacher":
            out[:, i] = rng.integers(0, 2, size=n) * 2.0 - 1.0
        else:
            raise ValueError(f"unknown sketch distribution {distribution!r}")
    out.setflags(write=False)
    return SketchBatch(out, distribution, int(seed))


def sketch_count(eps: float, delta: float, constant: float = 8.0) -> int:
    """Probe count ``ceil(constant * ln(2/delta) / eps^2)``.

    ``constant=8`` is the Gaussian Hutchinson requirement; Lanczos quadrature
    with Rademacher probes uses ``constant=24``.
    """
    if not (0 < eps < 1 and 0 < delta < 1):
        raise ValueError("eps and delta must lie in (0, 1)")
    return math.ceil(constant * math.log(2.0 / delta) / eps**2)


@dataclass(frozen=True)
class EstimatorConfig:
    alpha: float
    s: int = 100
    m: int = 30
    delta: float = 0.1
    eps: float = 0.1
    seed: int = 0

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if self.m < 0:
            raise ValueError("m must be >= 0")
        if not (0 < self.delta < 1 and 0 < self.eps < 1):
            raise ValueError("delta and eps must lie in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @classmethod
    def from_accuracy(cls, alpha: float, eps: float, delta: float, **kw) -> "EstimatorConfig":
        """Config whose probe count follows the Hutchinson sample bound."""
        return cls(alpha=alpha, s=sketch_count(eps, delta), eps=eps, delta=delta, **kw)


@dataclass
class EntropyEstimate:
    value: float  # bits
    method: str
    alpha: float
    s: int | None = None
    m: int | None = None
    elapsed: float = 0.0
    trace: float | None = None
    info: dict[str, Any] = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


def quadratic_forms(op, power: int, batch: SketchBatch) -> np.ndarray:
    """Per-probe values ``g_i^T G^power g_i`` using ``power`` applications of ``op``."""
    op = as_operator(op)
    if batch.n != op.n:
        raise ValueError(f"sketch length {batch.n} does not match operator order {op.n}")
    if power < 1 or int(power) != power:
        raise ValueError("power must be a positive integer")
    x = batch.vectors
    w = x
    for _ in range(int(power)):
        w = op(w)
    forms = np.einsum("ij,ij->j", x, w)
    if not np.all(np.isfinite(forms)):
        raise NumericalError("non-finite value in Hutchinson quadratic forms")
    return forms


def hutchinson_trace(op, power: int, batch: SketchBatch) -> float:
    return float(np.mean(quadratic_forms(op, power, batch)))


def power_iteration(op, max_iters: int = 1000, tol: float = 1e-8, seed: int = 0,
                    inflate: float = 0.0) -> float:
    """Dominant eigenvalue of a symmetric PSD operator, scaled by ``1 + inflate``.

    Stops once successive Rayleigh quotients differ by less than ``tol``
    relative to the current quotient.
    """
    op = as_operator(op)
    for attempt in range(4):
        v = _stream(seed, _POWER_STREAM + attempt).standard_normal(op.n)
        v /= np.linalg.norm(v)
        prev = None
        rq = 0.0
        degenerate = False
        for _ in range(max_iters):
            w = op(v)
            rq = float(v @ w)
            norm = float(np.linalg.norm(w))
            if norm == 0.0 or not math.isfinite(norm):
                degenerate = True
                break
            if prev is not None and abs(rq - prev) <= tol * abs(rq):
                break
            prev = rq
            v = w / norm
        if not degenerate:
            if rq <= 0:
                raise NumericalError(f"power iteration returned non-positive eigenvalue {rq}")
            return rq * (1.0 + inflate)
    raise NumericalError("power iteration kept hitting the zero vector")


def entropy_from_trace(trace: float, alpha: float) -> float:
    if not (trace > 0 and math.isfinite(trace)):
        raise CollapsedEstimateError(f"trace estimate collapsed to {trace!r}")
    return math.log2(trace) / (1.0 - alpha)


def integer_entropy(op, config: EstimatorConfig, batch: SketchBatch | None = None) -> EntropyEstimate:
    """Entropy for integer alpha >= 2 from Gaussian Hutchinson estimates of tr(G^alpha)."""
    alpha = config.alpha
    if alpha != int(alpha) or alpha < 2:
        raise ValueError(f"integer_entropy needs an integer alpha >= 2, got {alpha}")
    op = as_operator(op)
    t0 = time.perf_counter()
    if batch is None:
        batch = sample_sketch(op.n, config.s, "gaussian", config.seed)
    tr = hutchinson_trace(op, int(alpha), batch)
    value = entropy_from_trace(tr, alpha)
    return EntropyEstimate(value, "trace", alpha, s=batch.s, m=int(alpha),
                           elapsed=time.perf_counter() - t0, trace=tr)
