"""Spectral utilities: leading eigenpairs, k-means, SCORE and RSC.

Eigendecompositions are full dense symmetric solves; at the network
sizes handled here that is cheaper and more robust near eigenvalue
multiplicities than iterative solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import WeightedAdjacency, degrees

__all__ = [
    "EigPairs",
    "Assignment",
    "ClusterError",
    "leading_eigpairs",
    "kmeans",
    "score_ratios",
    "score_cluster",
    "rsc_cluster",
]


class ClusterError(RuntimeError):
    """Clustering produced an empty cluster in every restart."""


@dataclass(frozen=True)
class EigPairs:
    """values sorted by descending magnitude; vectors column-aligned."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        vectors = np.array(self.vectors, dtype=float)
        values.flags.writeable = False
        vectors.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)


@dataclass(frozen=True)
class Assignment:
    """Hard clustering into m nonempty groups, labels in 0..m-1."""

    labels: np.ndarray
    m: int

    def __post_init__(self):
        labels = np.array(self.labels, dtype=int)
        if labels.ndim != 1:
            raise ValueError("labels must be 1-d")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if labels.min() < 0 or labels.max() >= self.m:
            raise ValueError("labels out of range")
        if len(np.unique(labels)) != self.m:
            raise ValueError(f"empty cluster: only {len(np.unique(labels))} of {self.m} used")
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.m)


def leading_eigpairs(matrix: np.ndarray, m: int) -> EigPairs:
    """The m eigenpairs of largest magnitude of a symmetric matrix.

    Ordered by descending |lambda|; for tied magnitudes the positive
    eigenvalue comes first. Each vector's sign is fixed so its entry sum
    is positive (largest-magnitude entry made positive when the sum is
    exactly zero).
    """
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not 1 <= m <= n:
        raise ValueError(f"m={m} out of range 1..{n}")
    vals, vecs = np.linalg.eigh(a)
    # primary key |lambda| descending, secondary key lambda descending
    order = np.lexsort((-vals, -np.abs(vals)))[:m]
    vals = vals[order]
    vecs = vecs[:, order]
    for j in range(m):
        s = vecs[:, j].sum()
        if s < 0:
            vecs[:, j] = -vecs[:, j]
        elif s == 0:
            i = int(np.abs(vecs[:, j]).argmax())
            if vecs[i, j] < 0:
                vecs[:, j] = -vecs[:, j]
    return EigPairs(vals, vecs)


def _sq_dists(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return d2


def _plusplus_init(x: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((m, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for k in range(1, m):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[k] = x[idx]
        d2 = np.minimum(d2, ((x - centers[k]) ** 2).sum(axis=1))
    return centers


def _lloyd(x, m, rng, max_iter, tol):
    """One restart. Returns (wcss, labels) or None if a cluster emptied."""
    n = x.shape[0]
    centers = _plusplus_init(x, m, rng)
    prev = np.inf
    for _ in range(max_iter):
        d2 = _sq_dists(x, centers)
        labels = d2.argmin(axis=1)
        point_d2 = d2[np.arange(n), labels]
        counts = np.bincount(labels, minlength=m)
        if (counts == 0).any():
            # reseed each empty cluster at the point farthest from its center
            pd = point_d2.copy()
            for k in np.flatnonzero(counts == 0):
                far = int(pd.argmax())
                centers[k] = x[far]
                pd[far] = -1.0
            continue
        wcss = point_d2.sum()
        for k in range(m):
            centers[k] = x[labels == k].mean(axis=0)
        if prev - wcss <= tol * max(wcss, np.finfo(float).tiny):
            break
        prev = wcss
    d2 = _sq_dists(x, centers)
    labels = d2.argmin(axis=1)
    if (np.bincount(labels, minlength=m) == 0).any():
        return None
    wcss = d2[np.arange(n), labels].sum()
    return wcss, labels


def kmeans(rows: np.ndarray, m: int, seed=0, restarts: int = 50, max_iter: int = 100, tol: float = 1e-9) -> Assignment:
    """k-means with k-means++ starts; best of ``restarts`` runs by WCSS.

    Deterministic given the seed; WCSS ties keep the lowest restart
    index. Raises ClusterError if every restart ends with an empty
    cluster, which can only happen when m exceeds the number of distinct
    rows.
    """
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2:
        raise ValueError("rows must be 2-d")
    n = x.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"m={m} out of range 1..{n}")
    if m == 1:
        return Assignment(np.zeros(n, dtype=int), 1)
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        result = _lloyd(x, m, rng, max_iter, tol)
        if result is None:
            continue
        if best is None or result[0] < best[0]:
            best = result
    if best is None:
        raise ClusterError(f"every k-means restart left one of {m} clusters empty")
    return Assignment(best[1], m)


def score_ratios(matrix: np.ndarray, m: int) -> np.ndarray:
    """The n x (m-1) matrix of eigenvector ratios used by SCORE.

    Column k holds u_{k+1}(i) / u_1(i), clamped to [-log n, log n].
    Entries where u_1(i) = 0 are mapped to the clamp bound (0 when the
    numerator is also 0).
    """
    n = matrix.shape[0]
    if m < 2:
        raise ValueError("ratios need m >= 2")
    pairs = leading_eigpairs(matrix, m)
    lead = pairs.vectors[:, :1]
    rest = pairs.vectors[:, 1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = rest / lead
    ratios = np.nan_to_num(ratios, nan=0.0, posinf=np.inf, neginf=-np.inf)
    clamp = np.log(n)
    return np.clip(ratios, -clamp, clamp)


def score_cluster(adj: WeightedAdjacency, m: int, seed=0, restarts: int = 50) -> Assignment:
    """SCORE: k-means on eigenvector ratios.

    m = 1 returns the single-cluster assignment.
    """
    n = adj.n
    if not 1 <= m <= n:
        raise ValueError(f"m={m} out of range 1..{n}")
    if m == 1:
        return Assignment(np.zeros(n, dtype=int), 1)
    return kmeans(score_ratios(adj.weights, m), m, seed=seed, restarts=restarts)


def rsc_cluster(
    adj: WeightedAdjacency,
    m: int,
    reg: float | None = None,
    seed=0,
    restarts: int = 50,
) -> Assignment:
    """Regularized spectral clustering.

    Adds reg to every entry (default 0.25 * mean degree / n), forms the
    normalized adjacency D^{-1/2} A_reg D^{-1/2}, takes the top-m
    eigenvectors by magnitude, l2-normalizes the rows (zero rows stay
    zero) and k-means them.
    """
    n = adj.n
    if not 1 <= m <= n:
        raise ValueError(f"m={m} out of range 1..{n}")
    if reg is None:
        reg = 0.25 * degrees(adj).mean() / n
    if reg < 0:
        raise ValueError("reg must be nonnegative")
    if m == 1:
        return Assignment(np.zeros(n, dtype=int), 1)
    a_reg = adj.weights + reg
    dsum = a_reg.sum(axis=1)
    with np.errstate(divide="ignore"):
        inv_sqrt = np.where(dsum > 0, 1.0 / np.sqrt(dsum), 0.0)
    lap = a_reg * np.outer(inv_sqrt, inv_sqrt)
    pairs = leading_eigpairs(lap, m)
    rows = pairs.vectors.copy()
    norms = np.linalg.norm(rows, axis=1)
    keep = norms > 0
    rows[keep] /= norms[keep, None]
    return kmeans(rows, m, seed=seed, restarts=restarts)
