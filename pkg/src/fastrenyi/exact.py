"""Exact entropy functionals via a full symmetric eigendecomposition.

This is the O(n^3) reference every randomized estimator is checked against.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import NotPSDError
from .kernels import hadamard_joint

__all__ = [
    "ALPHA_EXCLUSION",
    "PSD_TOL",
    "check_alpha",
    "eigen_spectrum",
    "spectrum_entropy",
    "exact_entropy",
    "exact_joint_entropy",
    "exact_mutual_information",
    "exact_total_correlation",
]

ALPHA_EXCLUSION = 1e-6
PSD_TOL = 1e-10


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be a positive finite number, got {alpha}")
    if abs(alpha - 1.0) < ALPHA_EXCLUSION:
        raise ValueError("alpha = 1 is the Shannon limit and is not supported")
    return alpha


def eigen_spectrum(g) -> np.ndarray:
    """Eigenvalues of a symmetric PSD matrix, sorted non-increasing.

    Round-off negatives down to ``-PSD_TOL`` are clamped to zero; anything
    more negative raises :class:`NotPSDError`. Eigenvalues at or below the
    usual numerical-rank cutoff ``n * eps * lam_max`` are set to zero too,
    otherwise round-off noise of order 1e-17 inflates ``sum lam**alpha``
    noticeably for small alpha.
    """
    g = np.asarray(g, dtype=float)
    try:
        lam = np.linalg.eigvalsh(g)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigensolver failed: {exc}") from exc
    if lam[0] < -PSD_TOL:
        raise NotPSDError(f"matrix is not PSD (smallest eigenvalue {lam[0]:.3e})")
    lam = np.clip(lam, 0.0, None)
    lam[lam <= len(lam) * np.finfo(float).eps * lam[-1]] = 0.0
    return lam[::-1].copy()


def spectrum_entropy(lam: np.ndarray, alpha: float) -> float:
    """Renyi entropy in bits of a non-negative spectrum (0**alpha taken as 0)."""
    alpha = check_alpha(alpha)
    lam = np.asarray(lam, dtype=float)
    pos = lam[lam > 0]
    return math.log2(float(np.sum(pos**alpha))) / (1.0 - alpha)


def exact_entropy(g, alpha: float) -> float:
    return spectrum_entropy(eigen_spectrum(g), alpha)


def exact_joint_entropy(grams: Sequence[np.ndarray], alpha: float) -> float:
    if len(grams) == 1:
        return exact_entropy(grams[0], alpha)
    return exact_entropy(hadamard_joint(grams), alpha)


def exact_mutual_information(gram_x: Sequence[np.ndarray] | np.ndarray, gram_y, alpha: float) -> float:
    """``S(X1..XL) + S(Y) - S(X1..XL, Y)`` with joint entropies from Hadamard products."""
    if isinstance(gram_x, np.ndarray) and gram_x.ndim == 2:
        gram_x = [gram_x]
    gram_x = list(gram_x)
    return (
        exact_joint_entropy(gram_x, alpha)
        + exact_entropy(gram_y, alpha)
        - exact_joint_entropy(gram_x + [gram_y], alpha)
    )


def exact_total_correlation(grams: Sequence[np.ndarray], alpha: float) -> float:
    if len(grams) < 2:
        raise ValueError("total correlation needs at least two variables")
    marginals = math.fsum(exact_entropy(g, alpha) for g in grams)
    return marginals - exact_joint_entropy(grams, alpha)
