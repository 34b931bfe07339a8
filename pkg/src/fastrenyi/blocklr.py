"""Block low-rank approximation of shift-invariant Gram matrices.

Samples are partitioned by k-means in feature space. Under the induced
ordering, diagonal blocks of the Gram matrix are kept exactly and every
off-diagonal block is replaced by a rank-``k`` factorization from a
randomized SVD. A matvec then costs ``O(n^2/c + n c k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .exact import PSD_TOL, check_alpha
from .kernels import KernelSpec, as_samples, kernel_matrix, normalize_kernel
from .sketch import SpectralOperator

__all__ = [
    "Partition",
    "kmeans_partition",
    "kmeans_objective",
    "kernel_cluster_objective",
    "randomized_svd",
    "BlockLowRank",
    "build_block_lowrank",
    "default_blocking",
    "radius_term",
    "gaussian_lipschitz",
    "lowrank_entropy_error_bound",
    "perturbation_entropy_bound",
]


@dataclass(frozen=True)
class Partition:
    assignments: np.ndarray  # cluster index per sample
    centroids: np.ndarray
    radii: np.ndarray  # max member-to-centroid distance per cluster
    sizes: np.ndarray
    objective: float  # k-means objective, sum_s |V_s|^-1 sum_{i,j in V_s} |x_i - x_j|^2
    history: tuple[float, ...] = ()

    @property
    def c(self) -> int:
        return len(self.sizes)


def kmeans_objective(x: np.ndarray, assignments: np.ndarray, c: int) -> float:
    """Pairwise form of the k-means objective; equals twice the within-cluster SSE."""
    total = 0.0
    for s in range(c):
        pts = x[assignments == s]
        if len(pts):
            total += 2.0 * float(np.sum((pts - pts.mean(axis=0)) ** 2))
    return total


def kernel_cluster_objective(g: np.ndarray, assignments: np.ndarray) -> float:
    """Size-normalized within-cluster energy ``sum_s |V_s|^-1 sum_{i,j in V_s} G_ij^2``."""
    total = 0.0
    for s in np.unique(assignments):
        idx = np.flatnonzero(assignments == s)
        total += float(np.sum(g[np.ix_(idx, idx)] ** 2)) / len(idx)
    return total


def _plus_plus(x: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    n = len(x)
    centers = [x[rng.integers(n)]]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    for _ in range(1, c):
        total = d2.sum()
        if total > 0:
            i = rng.choice(n, p=d2 / total)
        else:
            i = rng.integers(n)
        centers.append(x[i])
        d2 = np.minimum(d2, np.sum((x - x[i]) ** 2, axis=1))
    return np.array(centers)


def _repair_empty(x: np.ndarray, labels: np.ndarray, c: int) -> np.ndarray:
    labels = labels.copy()
    while True:
        sizes = np.bincount(labels, minlength=c)
        empty = np.flatnonzero(sizes == 0)
        if len(empty) == 0:
            return labels
        big = int(np.argmax(sizes))
        members = np.flatnonzero(labels == big)
        centre = x[members].mean(axis=0)
        far = members[np.argmax(np.sum((x[members] - centre) ** 2, axis=1))]
        labels[far] = empty[0]


def _centroids(x: np.ndarray, labels: np.ndarray, c: int) -> np.ndarray:
    return np.array([x[labels == s].mean(axis=0) for s in range(c)])


def kmeans_partition(data, c: int, seed: int = 0, max_iters: int = 100, tol: float = 1e-6) -> Partition:
    """Lloyd's algorithm from k-means++ seeding, with empty clusters repaired."""
    x = as_samples(data)
    n = len(x)
    if c < 1 or c > n:
        raise ValueError(f"need 1 <= c <= n, got c={c}, n={n}")
    rng = np.random.default_rng(seed)
    centers = _plus_plus(x, c, rng)
    labels = np.argmin(cdist(x, centers, "sqeuclidean"), axis=1)
    labels = _repair_empty(x, labels, c)
    history = [kmeans_objective(x, labels, c)]
    for _ in range(max_iters):
        centers = _centroids(x, labels, c)
        new = np.argmin(cdist(x, centers, "sqeuclidean"), axis=1)
        new = _repair_empty(x, new, c)
        obj = kmeans_objective(x, new, c)
        changed = not np.array_equal(new, labels)
        labels = new
        history.append(obj)
        if not changed or abs(history[-2] - obj) <= tol * max(abs(obj), 1e-300):
            break
    centers = _centroids(x, labels, c)
    radii = np.array([np.sqrt(np.max(np.sum((x[labels == s] - centers[s]) ** 2, axis=1))) for s in range(c)])
    return Partition(labels, centers, radii, np.bincount(labels, minlength=c), history[-1], tuple(history))


def randomized_svd(block: np.ndarray, k: int, oversample: int = 10, seed: int = 0, power_iters: int = 1):
    """Rank-``k`` factors ``(U, S, V)`` with ``block ~= U @ diag(S) @ V.T``.

    Range finder with Gaussian test matrix, ``oversample`` extra columns and
    ``power_iters`` re-orthonormalized power iterations. Test-matrix rows are
    drawn first, so the sketch for a larger ``k`` extends the one for a smaller ``k``.
    """
    a = np.asarray(block, dtype=float)
    nr, nc = a.shape
    if not 1 <= k <= min(nr, nc):
        raise ValueError(f"rank {k} outside [1, {min(nr, nc)}]")
    ell = min(k + oversample, nr, nc)
    omega = np.random.default_rng(seed).standard_normal((ell, nc)).T
    q, _ = np.linalg.qr(a @ omega)
    for _ in range(power_iters):
        z, _ = np.linalg.qr(a.T @ q)
        q, _ = np.linalg.qr(a @ z)
    ub, s, vt = np.linalg.svd(q.T @ a, full_matrices=False)
    return q @ ub[:, :k], s[:k], vt[:k].T


@dataclass
class BlockLowRank:
    n: int
    perm: np.ndarray  # perm[p] = original index at partition-ordered position p
    offsets: np.ndarray  # block boundaries in partition order, length c + 1
    diag_blocks: list[np.ndarray]
    factors: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]]
    k: int
    partition: Partition
    spec: KernelSpec
    dim: int
    psd: bool | None = None  # set by the optional spot-check
    info: dict = field(default_factory=dict)

    @property
    def c(self) -> int:
        return len(self.diag_blocks)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape[0] != self.n:
            raise ValueError(f"length {v.shape[0]} does not match order {self.n}")
        xp = v[self.perm]
        out = np.zeros_like(xp)
        o = self.offsets
        for s, d in enumerate(self.diag_blocks):
            out[o[s]:o[s + 1]] += d @ xp[o[s]:o[s + 1]]
        for (s, t), (u, sig, w) in self.factors.items():
            xs, xt = xp[o[s]:o[s + 1]], xp[o[t]:o[t + 1]]
            if v.ndim == 1:
                out[o[s]:o[s + 1]] += u @ (sig * (w.T @ xt))
                out[o[t]:o[t + 1]] += w @ (sig * (u.T @ xs))
            else:
                out[o[s]:o[s + 1]] += u @ (sig[:, None] * (w.T @ xt))
                out[o[t]:o[t + 1]] += w @ (sig[:, None] * (u.T @ xs))
        y = np.empty_like(out)
        y[self.perm] = out
        return y

    __matmul__ = matvec

    def as_operator(self) -> SpectralOperator:
        return SpectralOperator(self.n, self.matvec)

    def to_dense(self) -> np.ndarray:
        """Materialize the approximation in the original sample order (small n only)."""
        gp = np.zeros((self.n, self.n))
        o = self.offsets
        for s, d in enumerate(self.diag_blocks):
            gp[o[s]:o[s + 1], o[s]:o[s + 1]] = d
        for (s, t), (u, sig, w) in self.factors.items():
            b = (u * sig) @ w.T
            gp[o[s]:o[s + 1], o[t]:o[t + 1]] = b
            gp[o[t]:o[t + 1], o[s]:o[s + 1]] = b.T
        g = np.empty_like(gp)
        g[np.ix_(self.perm, self.perm)] = gp
        return g

    def check_psd(self) -> bool:
        self.psd = bool(np.linalg.eigvalsh(self.to_dense())[0] >= -PSD_TOL)
        return self.psd


def default_blocking(n: int) -> tuple[int, int]:
    """Cluster count ~ n**(1/4) and rank ~ sqrt(n)."""
    return math.ceil(n**0.25), math.ceil(math.sqrt(n))


def build_block_lowrank(data, spec: KernelSpec | None = None, c: int | None = None, k: int | None = None,
                        seed: int = 0, partition: Partition | None = None, oversample: int = 10,
                        power_iters: int = 1, check_psd: bool = False) -> BlockLowRank:
    spec = spec or KernelSpec()
    if not spec.shift_invariant:
        raise ValueError(f"block low-rank approximation needs a shift-invariant kernel, got {spec.kind}")
    x = as_samples(data)
    n, dim = x.shape
    dc, dk = default_blocking(n)
    c = dc if c is None else c
    k = dk if k is None else k
    if k < 1:
        raise ValueError("rank must be >= 1")
    if partition is None:
        partition = kmeans_partition(x, c, seed=seed)
    labels = partition.assignments
    groups = [np.flatnonzero(labels == s) for s in range(partition.c)]
    perm = np.concatenate(groups)
    offsets = np.concatenate([[0], np.cumsum([len(g) for g in groups])])
    diag_all = np.ones(n)  # K_ii for a shift-invariant kernel with f(0) = 1

    diag_blocks = []
    for idx in groups:
        b = normalize_kernel(kernel_matrix(x[idx], x[idx], spec), diag_all[idx], diag_all[idx], n)
        b = np.triu(b) + np.triu(b, 1).T
        np.fill_diagonal(b, 1.0 / n)
        diag_blocks.append(b)

    factors = {}
    for s in range(len(groups)):
        for t in range(s + 1, len(groups)):
            rows, cols = groups[s], groups[t]
            b = normalize_kernel(kernel_matrix(x[rows], x[cols], spec), diag_all[rows], diag_all[cols], n)
            kk = min(k, len(rows), len(cols))
            block_seed = np.random.SeedSequence([seed, s, t]).generate_state(1)[0]
            factors[(s, t)] = randomized_svd(b, kk, oversample, int(block_seed), power_iters)

    blr = BlockLowRank(n, perm, offsets, diag_blocks, factors, k, partition, spec, dim)
    if check_psd:
        blr.check_psd()
    return blr


def radius_term(radii, sizes) -> float:
    """``sum_i r_i^2 |V_i| sum_{j>i} |V_j|`` with clusters sorted by increasing radius."""
    radii = np.asarray(radii, dtype=float)
    sizes = np.asarray(sizes, dtype=float)
    order = np.argsort(radii, kind="stable")
    r, v = radii[order], sizes[order]
    tail = np.concatenate([np.cumsum(v[::-1])[::-1][1:], [0.0]])
    return float(np.sum(r**2 * v * tail))


def gaussian_lipschitz(sigma: float, n: int) -> float:
    """Lipschitz constant of the normalized Gaussian Gram entries, ``1/(sigma sqrt(e) n)``."""
    return 1.0 / (sigma * math.sqrt(math.e) * n)


def _entropy_log_bound(alpha: float, x: float) -> float:
    if not x < 1:
        return math.inf
    return abs(alpha / (1.0 - alpha) * math.log2(1.0 - x))


def _inverse_norm(g: np.ndarray) -> float:
    lam_min = float(np.linalg.eigvalsh(g)[0])
    if lam_min <= PSD_TOL:
        raise ValueError("G is singular (smallest eigenvalue ~ 0); the bound is undefined")
    return 1.0 / lam_min


def lowrank_entropy_error_bound(g, blr: BlockLowRank, alpha: float, lipschitz: float | None = None,
                                rank: float | None = None) -> float:
    """Worst-case ``|S(G) - S(G_approx)|`` implied by the cluster radii.

    Returns ``inf`` when the bound is vacuous. Small-``n`` diagnostic: it needs
    the exact smallest eigenvalue of ``G``.
    """
    alpha = check_alpha(alpha)
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if lipschitz is None:
        lipschitz = gaussian_lipschitz(blr.spec.sigma, n)
    k = blr.k if rank is None else rank
    r = radius_term(blr.partition.radii, blr.partition.sizes)
    x = 4.0 * math.sqrt(2.0 * r * n) * lipschitz * k ** (-1.0 / blr.dim) * _inverse_norm(g)
    return _entropy_log_bound(alpha, x)


def perturbation_entropy_bound(g, g_approx, alpha: float) -> float:
    """``|alpha/(1-alpha) log2(1 - sqrt(n) |G^-1|_2 |G - G_approx|_2)|`` (``inf`` if vacuous)."""
    alpha = check_alpha(alpha)
    g = np.asarray(g, dtype=float)
    e = np.linalg.norm(g - np.asarray(g_approx, dtype=float), 2)
    return _entropy_log_bound(alpha, math.sqrt(g.shape[0]) * _inverse_norm(g) * e)
