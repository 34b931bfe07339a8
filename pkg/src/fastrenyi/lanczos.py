"""Stochastic Lanczos quadrature for ``tr(G**alpha)``.

Each Rademacher probe drives an ``m``-step Lanczos tridiagonalization with
full reorthogonalization; the first column of ``T**alpha`` then weights the
Lanczos basis. All probes advance together so that every step costs one
block matvec.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NotPSDError
from .exact import PSD_TOL
from .sketch import EntropyEstimate, EstimatorConfig, SketchBatch, as_operator, entropy_from_trace, sample_sketch

__all__ = [
    "BREAKDOWN_TOL",
    "LanczosFactorization",
    "lanczos_block",
    "lanczos_factorize",
    "tridiag_alpha_first_column",
    "lanczos_forms",
    "lanczos_entropy",
    "lanczos_steps",
]

BREAKDOWN_TOL = 1e-12


@dataclass(frozen=True)
class LanczosFactorization:
    diag: np.ndarray  # gamma_1..gamma_j
    offdiag: np.ndarray  # beta_1..beta_{j-1}
    Q: np.ndarray  # (n, j) orthonormal basis
    residual: float  # beta_j, norm of the unnormalized next Lanczos vector
    breakdown: bool

    @property
    def steps(self) -> int:
        return len(self.diag)

    @property
    def T(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def lanczos_block(op, x: np.ndarray, m: int):
    """Run ``m`` Lanczos steps on every column of ``x`` at once.

    Returns ``(gammas, betas, Q, steps)`` with shapes ``(m, s)``, ``(m, s)``,
    ``(m, n, s)`` and ``(s,)``. Column ``c`` is valid for its first
    ``steps[c]`` steps; after a breakdown its later basis vectors are zero.
    """
    op = as_operator(op)
    n, s = x.shape
    if m < 1 or m > n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    norms = np.linalg.norm(x, axis=0)
    if np.any(norms == 0):
        raise ValueError("zero start vector")
    Q = np.zeros((m, n, s))
    gammas = np.zeros((m, s))
    betas = np.zeros((m, s))
    steps = np.full(s, m)
    alive = np.ones(s, dtype=bool)
    Q[0] = x / norms
    for j in range(m):
        w = op(Q[j])
        if j > 0:
            w = w - betas[j - 1] * Q[j - 1]
        gammas[j] = np.einsum("ij,ij->j", w, Q[j])
        w = w - gammas[j] * Q[j]
        # full reorthogonalization: two passes of modified Gram-Schmidt
        for _ in range(2):
            for k in range(j + 1):
                w = w - np.einsum("ij,ij->j", Q[k], w) * Q[k]
        beta = np.linalg.norm(w, axis=0)
        beta[~alive] = 0.0
        betas[j] = beta
        if j + 1 < m:
            broke = alive & (beta < BREAKDOWN_TOL)
            steps[broke] = j + 1
            alive &= ~broke
            safe = np.where(alive, beta, 1.0)
            Q[j + 1] = np.where(alive, w / safe, 0.0)
    return gammas, betas, Q, steps


def lanczos_factorize(op, g: np.ndarray, m: int) -> LanczosFactorization:
    g = np.asarray(g, dtype=float).reshape(-1, 1)
    gammas, betas, Q, steps = lanczos_block(op, g, m)
    j = int(steps[0])
    return LanczosFactorization(
        diag=gammas[:j, 0].copy(),
        offdiag=betas[: j - 1, 0].copy(),
        Q=Q[:j, :, 0].T.copy(),
        residual=float(betas[j - 1, 0]),
        breakdown=j < m,
    )


def tridiag_alpha_first_column(diag: np.ndarray, offdiag: np.ndarray, alpha: float) -> np.ndarray:
    """First column of ``T**alpha`` for a symmetric PSD tridiagonal ``T``."""
    diag = np.asarray(diag, dtype=float)
    offdiag = np.asarray(offdiag, dtype=float)
    if len(diag) == 1:
        w = diag.copy()
        v = np.ones((1, 1))
    else:
        w, v = eigh_tridiagonal(diag, offdiag)
    if w.min() < -PSD_TOL:
        raise NotPSDError(f"Ritz value {w.min():.3e} is negative; operator is not PSD")
    w = np.clip(w, 0.0, None)
    return v @ (w**alpha * v[0])


def lanczos_forms(op, x: np.ndarray, m: int, alpha: float) -> np.ndarray:
    """Per-column ``F_i = x_i^T sum_k p_k q_k`` (unscaled, as in the quadrature rule)."""
    gammas, betas, Q, steps = lanczos_block(op, x, m)
    out = np.empty(x.shape[1])
    for c in range(x.shape[1]):
        j = int(steps[c])
        p = tridiag_alpha_first_column(gammas[:j, c], betas[: j - 1, c], alpha)
        out[c] = x[:, c] @ (Q[:j, :, c].T @ p)
    return out


def lanczos_entropy(op, config: EstimatorConfig, batch: SketchBatch | None = None) -> EntropyEstimate:
    """Entropy from ``(sqrt(n)/s) * sum_i F_i`` with Rademacher probes.

    For Rademacher probes ``|g|^2 = n``, so ``sqrt(n) F_i`` equals the Gauss
    quadrature value ``|g|^2 e_1^T T^alpha e_1``.
    """
    op = as_operator(op)
    t0 = time.perf_counter()
    if batch is None:
        batch = sample_sketch(op.n, config.s, "rademacher", config.seed)
    m = min(config.m, op.n)
    forms = lanczos_forms(op, batch.vectors, m, config.alpha)
    tr = math.sqrt(op.n) * float(np.mean(forms))
    value = entropy_from_trace(tr, config.alpha)
    return EntropyEstimate(value, "lanczos", config.alpha, s=batch.s, m=m,
                           elapsed=time.perf_counter() - t0, trace=tr)


def lanczos_steps(eps: float, alpha: float, kappa: float) -> int:
    """``ceil(sqrt(kappa)/4 * ln(kappa**(alpha + 1/2) / eps))``."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not kappa > 1:
        raise ValueError(f"condition number must exceed 1, got {kappa}")
    return math.ceil(0.25 * math.sqrt(kappa) * ((alpha + 0.5) * math.log(kappa) - math.log(eps)))
