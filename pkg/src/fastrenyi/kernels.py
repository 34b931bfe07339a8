"""Kernel evaluation and normalized Gram matrices.

A Gram matrix here is always the normalized form

    G_ij = K_ij / (n * sqrt(K_ii * K_jj))

so its diagonal is exactly ``1/n`` and its trace is one. Gram matrices are
returned as read-only ``numpy`` arrays.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

__all__ = [
    "KernelSpec",
    "as_samples",
    "kernel_value",
    "kernel_matrix",
    "build_gram",
    "normalize_kernel",
    "hadamard_joint",
    "load_csv",
]


@dataclass(frozen=True)
class KernelSpec:
    """Kernel choice.

    ``kind="gaussian"`` uses ``exp(-|x-y|^2 / (2 sigma^2))``;
    ``kind="polynomial"`` uses ``(x.y + r)^p``.
    """

    kind: str = "gaussian"
    sigma: float = 1.0
    r: float = 1.0
    p: int = 2

    def __post_init__(self):
        if self.kind == "gaussian":
            if not (self.sigma > 0 and math.isfinite(self.sigma)):
                raise ValueError(f"gaussian kernel needs sigma > 0, got {self.sigma}")
        elif self.kind == "polynomial":
            if int(self.p) != self.p or self.p < 1:
                raise ValueError(f"polynomial kernel needs integer p >= 1, got {self.p}")
            if not (self.r >= 0 and math.isfinite(self.r)):
                raise ValueError(f"polynomial kernel needs r >= 0, got {self.r}")
        else:
            raise ValueError(f"unknown kernel kind {self.kind!r}")

    @classmethod
    def gaussian(cls, sigma: float = 1.0) -> "KernelSpec":
        return cls("gaussian", sigma=sigma)

    @classmethod
    def polynomial(cls, r: float = 1.0, p: int = 2) -> "KernelSpec":
        return cls("polynomial", r=r, p=int(p))

    @property
    def shift_invariant(self) -> bool:
        return self.kind == "gaussian"


def as_samples(data) -> np.ndarray:
    """Coerce ``data`` to a finite float matrix of shape (n, d) with n >= 2."""
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise ValueError(f"samples must be a 2-D array, got shape {x.shape}")
    n, d = x.shape
    if n < 2 or d < 1:
        raise ValueError(f"need at least 2 samples and 1 feature, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("samples contain non-finite values")
    return x


def kernel_value(x, y, spec: KernelSpec) -> float:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite input")
    if spec.kind == "gaussian":
        diff = x - y
        return math.exp(-float(diff @ diff) / (2.0 * spec.sigma**2))
    return float((float(x @ y) + spec.r) ** spec.p)


def kernel_matrix(x: np.ndarray, y: np.ndarray, spec: KernelSpec) -> np.ndarray:
    """Raw (unnormalized) kernel block ``K[i, j] = phi(x_i, y_j)``."""
    if spec.kind == "gaussian":
        # cdist evaluates each pair independently, so a sub-block is bitwise
        # identical to the same entries of the full matrix.
        sq = cdist(x, y, "sqeuclidean")
        return np.exp(sq * (-0.5 / spec.sigma**2))
    return (x @ y.T + spec.r) ** spec.p


def _kernel_diag(x: np.ndarray, spec: KernelSpec) -> np.ndarray:
    if spec.kind == "gaussian":
        return np.ones(len(x))
    return (np.einsum("ij,ij->i", x, x) + spec.r) ** spec.p


def normalize_kernel(k: np.ndarray, diag_rows: np.ndarray, diag_cols: np.ndarray, n: int) -> np.ndarray:
    """Apply ``K_ij / (n sqrt(K_ii K_jj))`` to a kernel block."""
    return k / np.sqrt(np.multiply.outer(diag_rows, diag_cols)) / n


def build_gram(data, spec: KernelSpec | None = None) -> np.ndarray:
    """Normalized Gram matrix of ``data`` under ``spec`` (gaussian, sigma=1 by default)."""
    spec = spec or KernelSpec()
    x = as_samples(data)
    n = len(x)
    k = kernel_matrix(x, x, spec)
    if not np.all(np.isfinite(k)):
        raise ValueError("kernel produced non-finite values")
    diag = np.diag(k).copy()
    if np.any(diag <= 0):
        raise ValueError("kernel has K_ii <= 0; normalization is undefined")
    g = normalize_kernel(k, diag, diag, n)
    g = np.triu(g) + np.triu(g, 1).T
    np.fill_diagonal(g, 1.0 / n)
    g.setflags(write=False)
    return g


def hadamard_joint(grams: Sequence[np.ndarray]) -> np.ndarray:
    """Trace-normalized Hadamard product of Gram matrices (the joint Gram).

    Entries are multiplied in sorted order, so the result is bitwise
    independent of the order of ``grams``.
    """
    if len(grams) < 2:
        raise ValueError("hadamard_joint needs at least two Gram matrices")
    shape = np.shape(grams[0])
    if any(np.shape(g) != shape for g in grams):
        raise ValueError("Gram matrices must share the same order")
    stack = np.sort(np.stack([np.asarray(g, dtype=float) for g in grams]), axis=0)
    prod = stack[0].copy()
    for layer in stack[1:]:
        prod *= layer
    tr = np.trace(prod)
    if not tr > 0:
        raise ArithmeticError("joint Gram has non-positive trace")
    joint = prod / tr
    joint = np.triu(joint) + np.triu(joint, 1).T
    np.fill_diagonal(joint, 1.0 / shape[0])
    joint.setflags(write=False)
    return joint


def _is_number(field: str) -> bool:
    try:
        float(field)
    except ValueError:
        return False
    return True


def load_csv(path: str | Path) -> np.ndarray:
    """Read one sample per row; a non-numeric first row is treated as a header."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(f.strip() for f in row)]
    if not rows:
        raise ValueError(f"{path}: no data")
    if not all(_is_number(f) for f in rows[0]):
        rows = rows[1:]
    try:
        data = np.array([[float(f) for f in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric field ({exc})") from None
    return as_samples(data)
