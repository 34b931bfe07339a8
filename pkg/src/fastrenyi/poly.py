"""Fractional-order estimators from truncated Taylor (binomial) and Chebyshev series.

Both estimators rescale the spectrum by an estimate of the dominant
eigenvalue and evaluate a degree-``m`` polynomial of the operator against
Gaussian probes, so the matrix is only ever touched through matvecs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .exact import check_alpha
from .sketch import (
    EntropyEstimate,
    EstimatorConfig,
    SketchBatch,
    as_operator,
    entropy_from_trace,
    power_iteration,
    sample_sketch,
)

__all__ = [
    "lambert_w0",
    "TaylorPlan",
    "taylor_plan",
    "taylor_series_scalar",
    "taylor_degree",
    "taylor_forms",
    "taylor_entropy",
    "ChebyshevPlan",
    "chebyshev_coefficients",
    "chebyshev_coefficient_direct",
    "chebyshev_series_scalar",
    "chebyshev_degree",
    "clenshaw_forms",
    "chebyshev_entropy",
]


def lambert_w0(z: float, tol: float = 1e-12, max_iter: int = 50) -> float:
    """Principal branch of the Lambert W function via Halley iteration."""
    z = float(z)
    if z < -1.0 / math.e:
        raise ValueError("W0 is real only for z >= -1/e")
    if z == 0.0:
        return 0.0
    w = math.log1p(z)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0)
        step = f / denom
        w -= step
        if abs(step) <= tol * max(1.0, abs(w)):
            break
    return w


# --- Taylor -----------------------------------------------------------------


@dataclass(frozen=True)
class TaylorPlan:
    alpha: float
    lam_max: float
    m: int
    coeffs: np.ndarray  # binomial coefficients C(alpha, 0..m)


def taylor_plan(alpha: float, lam_max: float, m: int) -> TaylorPlan:
    if m < 0:
        raise ValueError("degree must be non-negative")
    c = np.empty(m + 1)
    c[0] = 1.0
    for i in range(m):
        c[i + 1] = c[i] * (alpha - i) / (i + 1)
    return TaylorPlan(alpha, lam_max, m, c)


def taylor_series_scalar(lam, alpha: float, lam_max: float, m: int):
    """Degree-``m`` binomial series for ``lam**alpha`` expanded around ``lam_max``."""
    plan = taylor_plan(alpha, lam_max, m)
    x = np.asarray(lam, dtype=float) / lam_max - 1.0
    acc = np.zeros_like(x)
    xp = np.ones_like(x)
    for c in plan.coeffs:
        acc = acc + c * xp
        xp = xp * x
    return lam_max**alpha * acc


def _degree_inputs(eps, alpha, kappa, n):
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    check_alpha(alpha)
    if (kappa is None) == (n is None):
        raise ValueError("give exactly one of kappa (full rank) or n (rank deficient)")
    if kappa is not None and not kappa > 1:
        raise ValueError(f"condition number must exceed 1, got {kappa}")
    if n is not None and n < 1:
        raise ValueError("n must be positive")


def taylor_degree(eps: float, alpha: float, kappa: float | None = None, n: int | None = None) -> int:
    """Taylor degree guaranteeing per-eigenvalue error ``eps * lam_min**alpha``.

    Pass ``kappa`` for a full-rank matrix or ``n`` for a rank-deficient one.
    The result is never below ``ceil(alpha) + 1``, so the series always
    reaches its alternating tail even when ``kappa`` is close to one.
    """
    _degree_inputs(eps, alpha, kappa, n)
    floor = math.ceil(alpha) + 1
    if n is not None:
        return max(floor, math.ceil(alpha + (n * math.gamma(alpha + 1) / (eps * math.pi)) ** (1.0 / alpha)))
    beta = -math.log1p(-1.0 / kappa) / (alpha + 1)
    z = kappa * beta * (math.gamma(alpha + 1) / (eps * math.pi)) ** (1.0 / (alpha + 1))
    return max(floor, math.ceil(alpha + lambert_w0(z) / beta))


# keeps the estimated spectrum inside the expansion interval when power
# iteration slightly underestimates the top eigenvalue
LAM_MAX_INFLATION = 1e-6


def _lam_max(op, config: EstimatorConfig, lam_max: float | None) -> float:
    if lam_max is None:
        lam_max = power_iteration(op, seed=config.seed, inflate=LAM_MAX_INFLATION)
    if not lam_max > 0:
        raise NumericalError(f"dominant eigenvalue estimate must be positive, got {lam_max}")
    return float(lam_max)


def taylor_forms(op, plan: TaylorPlan, x: np.ndarray) -> np.ndarray:
    """Per-column ``x_i^T f_m(G) x_i`` for the Taylor polynomial ``f_m``."""
    op = as_operator(op)
    c = plan.coeffs
    w = x
    acc = c[0] * np.einsum("ij,ij->j", x, x)
    for i in range(1, plan.m + 1):
        w = op(w) / plan.lam_max - w
        acc = acc + c[i] * np.einsum("ij,ij->j", x, w)
    return plan.lam_max**plan.alpha * acc


def taylor_entropy(op, config: EstimatorConfig, lam_max: float | None = None,
                   batch: SketchBatch | None = None) -> EntropyEstimate:
    op = as_operator(op)
    t0 = time.perf_counter()
    lam = _lam_max(op, config, lam_max)
    plan = taylor_plan(config.alpha, lam, config.m)
    if batch is None:
        batch = sample_sketch(op.n, config.s, "gaussian", config.seed)
    forms = taylor_forms(op, plan, batch.vectors)
    tr = float(np.mean(forms))
    value = entropy_from_trace(tr, config.alpha)
    return EntropyEstimate(value, "taylor", config.alpha, s=batch.s, m=config.m,
                           elapsed=time.perf_counter() - t0, trace=tr, info={"lam_max": lam})


# --- Chebyshev --------------------------------------------------------------


@dataclass(frozen=True)
class ChebyshevPlan:
    alpha: float
    lam_max: float
    m: int
    coeffs: np.ndarray  # c_0..c_m; the series uses c_0 / 2


def chebyshev_coefficients(alpha: float, lam_max: float, m: int) -> ChebyshevPlan:
    """Chebyshev coefficients of ``x**alpha`` on ``[0, lam_max]``.

    Built from ``c_{k+1} = c_k (alpha - k) / (alpha + k + 1)``, which avoids the
    overflow of evaluating the Gamma ratios directly at large ``k``.
    """
    if m < 0:
        raise ValueError("degree must be non-negative")
    c = np.empty(m + 1)
    c[0] = 2.0 * lam_max**alpha * math.exp(math.lgamma(alpha + 0.5) - math.lgamma(alpha + 1)) / math.sqrt(math.pi)
    for k in range(m):
        c[k + 1] = c[k] * (alpha - k) / (alpha + k + 1)
    return ChebyshevPlan(alpha, lam_max, m, c)


def chebyshev_coefficient_direct(alpha: float, lam_max: float, k: int) -> float:
    """Closed form with explicit falling factorials; fine for small ``k`` only."""
    falling = math.prod(alpha - j for j in range(k))
    falling_shift = math.prod(alpha + k - j for j in range(k))
    return (2.0 * lam_max**alpha * math.gamma(alpha + 0.5) * falling
            / (math.sqrt(math.pi) * math.gamma(alpha + 1) * falling_shift))


def chebyshev_series_scalar(lam, alpha: float, lam_max: float, m: int):
    """Evaluate ``c_0/2 + sum_k c_k T_k(2 lam / lam_max - 1)`` by Clenshaw."""
    c = chebyshev_coefficients(alpha, lam_max, m).coeffs
    t = 2.0 * np.asarray(lam, dtype=float) / lam_max - 1.0
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for k in range(m, 0, -1):
        b1, b2 = c[k] + 2.0 * t * b1 - b2, b1
    return c[0] / 2.0 + t * b1 - b2


def chebyshev_degree(eps: float, alpha: float, kappa: float | None = None, n: int | None = None) -> int:
    """Chebyshev degree guaranteeing per-eigenvalue error ``eps * lam_min**alpha``."""
    _degree_inputs(eps, alpha, kappa, n)
    core = math.gamma(alpha + 0.5) * math.gamma(alpha) / (eps * math.pi**1.5)
    if n is not None:
        return math.ceil(alpha + (n * core) ** (1.0 / (2 * alpha)))
    return math.ceil(alpha + math.sqrt(kappa) * core ** (1.0 / (2 * alpha)))


def clenshaw_forms(op, plan: ChebyshevPlan, x: np.ndarray) -> np.ndarray:
    """Per-column ``x_i^T f_m(G) x_i`` via the backward Clenshaw recurrence.

    ``y_k = c_k x + (4/lam_max) G y_{k+1} - 2 y_{k+1} - y_{k+2}`` for
    ``k = m..0``, after which the quadratic form is ``x^T (y_0 - y_2) / 2``.
    """
    op = as_operator(op)
    c = plan.coeffs
    scale = 4.0 / plan.lam_max
    y1 = np.zeros_like(x)  # y_{k+1}
    y2 = np.zeros_like(x)  # y_{k+2}
    y3 = np.zeros_like(x)  # y_{k+3}
    for k in range(plan.m, -1, -1):
        if k == plan.m:
            yk = c[k] * x
        else:
            yk = c[k] * x + scale * op(y1) - 2.0 * y1 - y2
        y3, y2, y1 = y2, y1, yk
    # y1 = y_0, y3 = y_2
    return 0.5 * np.einsum("ij,ij->j", x, y1 - y3)


def chebyshev_entropy(op, config: EstimatorConfig, lam_max: float | None = None,
                      batch: SketchBatch | None = None) -> EntropyEstimate:
    op = as_operator(op)
    t0 = time.perf_counter()
    lam = _lam_max(op, config, lam_max)
    plan = chebyshev_coefficients(config.alpha, lam, config.m)
    if batch is None:
        batch = sample_sketch(op.n, config.s, "gaussian", config.seed)
    forms = clenshaw_forms(op, plan, batch.vectors)
    if not np.all(np.isfinite(forms)):
        raise NumericalError("non-finite value in Clenshaw recurrence")
    tr = float(np.mean(forms))
    value = entropy_from_trace(tr, config.alpha)
    return EntropyEstimate(value, "chebyshev", config.alpha, s=batch.s, m=config.m,
                           elapsed=time.perf_counter() - t0, trace=tr, info={"lam_max": lam})
