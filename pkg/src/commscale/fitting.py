"""Plug-in estimation of weighted block-model parameters.

Given an adjacency matrix and a candidate assignment into m groups, the
estimators are closed-form functions of the block weight sums
S_kl = 1_k' A 1_l and the block degree totals t_k = 1_k' A 1:

    theta_i = sqrt(S_kk) / t_k * d_i          (i in group k)
    B_kl    = S_kl / sqrt(S_kk * S_ll)
    M_ij    = S_kl / (t_k * t_l) * d_i * d_j  (i in k, j in l)

The variance profile is nu(M) entrywise, floored to stay strictly
positive so that the doubly-stochastic scaling downstream exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import VarianceFunction
from .network import WeightedAdjacency
from .spectral import Assignment

__all__ = [
    "FitError",
    "FittedStep",
    "block_sums",
    "estimate_theta",
    "estimate_block_matrix",
    "estimate_mean",
    "estimate_variance",
    "fit_step",
]

VARIANCE_FLOOR_SCALE = 1e-8


class FitError(RuntimeError):
    """Degenerate fitting step (zero block weight or empty cluster)."""


@dataclass(frozen=True)
class FittedStep:
    """All m-group plug-in estimates for one step of the sequential fit."""

    m: int
    assignment: Assignment
    theta: np.ndarray
    block_matrix: np.ndarray
    mean: np.ndarray
    variance: np.ndarray

    def __post_init__(self):
        for name in ("theta", "block_matrix", "mean", "variance"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _weights_of(adj) -> np.ndarray:
    return adj.weights if isinstance(adj, WeightedAdjacency) else np.asarray(adj, dtype=float)


def block_sums(adj, assignment: Assignment):
    """Block weight sums S (m x m, symmetrized) and degree totals t (m,).

    Raises FitError when any within-group weight S_kk or group total t_k
    is not strictly positive; such a step cannot be fitted.
    """
    w = _weights_of(adj)
    labels = assignment.labels
    m = assignment.m
    onehot = np.zeros((w.shape[0], m))
    onehot[np.arange(w.shape[0]), labels] = 1.0
    s = onehot.T @ w @ onehot
    s = (s + s.T) / 2.0
    totals = onehot.T @ w.sum(axis=1)
    if (np.diag(s) <= 0).any():
        k = int(np.flatnonzero(np.diag(s) <= 0)[0])
        raise FitError(f"group {k} has zero within-group weight")
    if (totals <= 0).any():
        k = int(np.flatnonzero(totals <= 0)[0])
        raise FitError(f"group {k} has zero total weight")
    return s, totals


def estimate_theta(adj, assignment: Assignment) -> np.ndarray:
    s, totals = block_sums(adj, assignment)
    d = _weights_of(adj).sum(axis=1)
    labels = assignment.labels
    return np.sqrt(np.diag(s))[labels] / totals[labels] * d


def estimate_block_matrix(adj, assignment: Assignment) -> np.ndarray:
    s, _ = block_sums(adj, assignment)
    root = np.sqrt(np.diag(s))
    return s / np.outer(root, root)


def estimate_mean(adj, assignment: Assignment) -> np.ndarray:
    s, totals = block_sums(adj, assignment)
    d = _weights_of(adj).sum(axis=1)
    labels = assignment.labels
    coeff = s / np.outer(totals, totals)
    return coeff[np.ix_(labels, labels)] * np.outer(d, d)


def floor_positive(values: np.ndarray) -> np.ndarray:
    """Floor entries at 1e-8 times the mean positive entry."""
    pos = values[values > 0]
    if pos.size == 0:
        raise FitError("matrix has no positive entries to calibrate the floor")
    return np.maximum(values, VARIANCE_FLOOR_SCALE * pos.mean())


def estimate_variance(mean: np.ndarray, variance_fn: VarianceFunction) -> np.ndarray:
    """V = nu(M) entrywise, floored to be strictly positive.

    The bernoulli kind requires every mean below 1; linear kinds accept
    any mean and rely on the floor for nonpositive values.
    """
    mean = np.asarray(mean, dtype=float)
    if variance_fn.kind == "bernoulli" and (mean >= 1.0).any():
        raise FitError(f"bernoulli variance needs means < 1, got max {mean.max():.6g}")
    return floor_positive(variance_fn(mean))


def fit_step(adj, assignment: Assignment, variance_fn: VarianceFunction | None = None) -> FittedStep:
    """Compute all plug-in estimates for one candidate group count."""
    if variance_fn is None:
        variance_fn = VarianceFunction.identity()
    mean = estimate_mean(adj, assignment)
    return FittedStep(
        m=assignment.m,
        assignment=assignment,
        theta=estimate_theta(adj, assignment),
        block_matrix=estimate_block_matrix(adj, assignment),
        mean=mean,
        variance=estimate_variance(mean, variance_fn),
    )
