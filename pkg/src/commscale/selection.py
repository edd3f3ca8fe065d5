"""Selecting the number of communities.

Two families are implemented. The sequential variance-profile test
fits m groups, scales the fitted variance profile to doubly stochastic
form, and stops at the first m where the (m+1)-th largest eigenvalue
magnitude of the scaled adjacency falls below 2 + epsilon. The
penalized-likelihood baselines evaluate CBIC and ICL over a range of m
and take the argmax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .fitting import FitError, FittedStep, fit_step, floor_positive
from .model import EdgeDistribution, VarianceFunction
from .network import WeightedAdjacency
from .scaling import ScalingError, scaled_matrix, sinkhorn_symmetric
from .spectral import Assignment, ClusterError, rsc_cluster, score_cluster

__all__ = [
    "StepRecord",
    "SelectionTrace",
    "svps_statistic",
    "svps_select",
    "log_likelihood",
    "cbic_score",
    "icl_score",
    "select_by_score",
    "score_select",
    "EPSILON_PRESETS",
]

EPSILON_PRESETS = (0.02, 0.05, 0.10)


@dataclass(frozen=True)
class StepRecord:
    """One evaluated candidate m: the statistic or score, and fit status."""

    m: int
    value: float
    status: str  # "ok" or "failed"
    note: str = ""


@dataclass(frozen=True)
class SelectionTrace:
    method: str  # "svps", "cbic" or "icl"
    steps: tuple[StepRecord, ...]
    k_hat: int | None
    threshold: float | None = None  # svps only
    stopped: bool = False  # svps: threshold crossed before m_max

    def to_csv(self) -> str:
        lines = ["method,m,value,status,selected"]
        for rec in self.steps:
            sel = "1" if rec.m == self.k_hat else "0"
            lines.append(f"{self.method},{rec.m},{rec.value!r},{rec.status},{sel}")
        return "\n".join(lines) + "\n"


def _as_weights(adj):
    return adj.weights if isinstance(adj, WeightedAdjacency) else np.asarray(adj, dtype=float)


def svps_statistic(adj, fitted: FittedStep, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    """|lambda_{m+1}| of the scaled adjacency Psi^{1/2} A Psi^{1/2}.

    Psi solves the doubly-stochastic scaling of the step's fitted
    variance profile. Scaling failures propagate as ScalingError.
    """
    w = _as_weights(adj)
    n = w.shape[0]
    if fitted.m + 1 > n:
        raise ValueError(f"statistic needs m+1 <= n, got m={fitted.m}, n={n}")
    scaling = sinkhorn_symmetric(fitted.variance, tol=tol, max_iter=max_iter)
    scaled = scaled_matrix(w, scaling.psi)
    mags = np.sort(np.abs(np.linalg.eigvalsh(scaled)))[::-1]
    return float(mags[fitted.m])


def _make_clusterer(clusterer, restarts, rsc_reg):
    if callable(clusterer):
        return clusterer
    if clusterer == "score":
        return lambda adj, m, seed: score_cluster(adj, m, seed=seed, restarts=restarts)
    if clusterer == "rsc":
        return lambda adj, m, seed: rsc_cluster(adj, m, reg=rsc_reg, seed=seed, restarts=restarts)
    raise ValueError(f"unknown clusterer {clusterer!r}")


def svps_select(
    adj: WeightedAdjacency,
    variance_fn: VarianceFunction | None = None,
    epsilon: float = 0.05,
    m_max: int = 12,
    clusterer="score",
    seed=0,
    restarts: int = 50,
    rsc_reg: float | None = None,
) -> SelectionTrace:
    """Sequential test: stop at the first m with statistic below 2 + epsilon.

    For m = 1..m_max: cluster, fit, scale, evaluate. Steps with
    degenerate fits or failed scalings are recorded with value +inf and
    never stop the loop. If no step stops, k_hat is None.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if variance_fn is None:
        variance_fn = VarianceFunction.identity()
    cluster = _make_clusterer(clusterer, restarts, rsc_reg)
    threshold = 2.0 + epsilon
    steps = []
    k_hat = None
    stopped = False
    for m in range(1, m_max + 1):
        try:
            assignment = cluster(adj, m, seed)
            fitted = fit_step(adj, assignment, variance_fn)
            value = svps_statistic(adj, fitted)
        except (FitError, ClusterError, ScalingError) as exc:
            steps.append(StepRecord(m=m, value=math.inf, status="failed", note=str(exc)))
            continue
        steps.append(StepRecord(m=m, value=value, status="ok"))
        if value < threshold:
            k_hat = m
            stopped = True
            break
    return SelectionTrace(
        method="svps", steps=tuple(steps), k_hat=k_hat, threshold=threshold, stopped=stopped
    )


def _check_counts(values: np.ndarray, what: str, upper: int | None = None) -> np.ndarray:
    rounded = np.round(values)
    if not np.allclose(values, rounded, rtol=0, atol=1e-9):
        raise ValueError(f"{what} likelihood needs integer weights")
    counts = rounded.astype(int)
    if (counts < 0).any():
        raise ValueError(f"{what} likelihood needs nonnegative weights")
    if upper is not None and (counts > upper).any():
        raise ValueError(f"{what} likelihood needs weights <= {upper}")
    return counts


def log_likelihood(adj, mean: np.ndarray, dist) -> float:
    """Log mass of the network given entrywise mean parameters.

    The sum runs over all ordered node pairs, so each off-diagonal pair
    contributes twice (once per direction) and each diagonal entry once.
    dist is an EdgeDistribution or one of "poisson", "binomial",
    "negbinom", "bernoulli". Mean entries are floored positive as in
    fitting; probability-type parameters are additionally capped at
    1 - 1e-8 so boundary fits keep a finite likelihood.
    """
    a = _as_weights(adj)
    mu = floor_positive(np.asarray(mean, dtype=float))
    kind = dist.kind if isinstance(dist, EdgeDistribution) else str(dist)
    trials = dist.trials if isinstance(dist, EdgeDistribution) else 5
    cap = 1.0 - 1e-8
    if kind == "poisson":
        counts = _check_counts(a, "poisson")
        terms = stats.poisson.logpmf(counts, mu)
    elif kind == "binomial":
        counts = _check_counts(a, "binomial", upper=trials)
        terms = stats.binom.logpmf(counts, trials, np.minimum(mu / trials, cap))
    elif kind in ("negbinom", "negative_binomial"):
        counts = _check_counts(a, "negative binomial")
        terms = stats.nbinom.logpmf(counts, trials, 1.0 - np.minimum(mu / trials, cap))
    elif kind == "bernoulli":
        counts = _check_counts(a, "bernoulli", upper=1)
        terms = stats.bernoulli.logpmf(counts, np.minimum(mu, cap))
    else:
        raise ValueError(f"unknown likelihood {kind!r}")
    return float(terms.sum())


def cbic_score(adj, fitted: FittedStep, dist, lam: float = 1.0) -> float:
    """log f(A | M) - [lam * n * log m + m(m+1)/2 * log n]."""
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    w = _as_weights(adj)
    n = w.shape[0]
    m = fitted.m
    penalty = lam * n * math.log(m) + m * (m + 1) / 2.0 * math.log(n)
    return log_likelihood(w, fitted.mean, dist) - penalty


def icl_score(adj, fitted: FittedStep, dist) -> float:
    """log f(A | M) - [sum_k n_k log(n/n_k) + m(m+2)/2 * log n]."""
    w = _as_weights(adj)
    n = w.shape[0]
    m = fitted.m
    sizes = fitted.assignment.sizes
    entropy = float((sizes * np.log(n / sizes)).sum())
    penalty = entropy + m * (m + 2) / 2.0 * math.log(n)
    return log_likelihood(w, fitted.mean, dist) - penalty


def select_by_score(scores) -> int:
    """argmax m over (m, score) pairs; ties go to the smallest m."""
    items = sorted(scores, key=lambda pair: pair[0])
    if not items:
        raise ValueError("no scores to select from")
    best_m, best = items[0]
    for m, value in items[1:]:
        if value > best:
            best_m, best = m, value
    return best_m


def score_select(
    adj: WeightedAdjacency,
    dist,
    method: str = "cbic",
    m_range=range(1, 11),
    clusterer="score",
    seed=0,
    lam: float = 1.0,
    restarts: int = 50,
    rsc_reg: float | None = None,
) -> SelectionTrace:
    """Evaluate CBIC or ICL over m_range and pick the argmax.

    Degenerate fits are recorded as failed and excluded from the argmax.
    The likelihood distribution is a required choice; there is no
    default law.
    """
    if method not in ("cbic", "icl"):
        raise ValueError(f"method must be cbic or icl, got {method!r}")
    cluster = _make_clusterer(clusterer, restarts, rsc_reg)
    steps = []
    usable = []
    for m in m_range:
        try:
            assignment = cluster(adj, m, seed)
            fitted = fit_step(adj, assignment, VarianceFunction.identity())
            if method == "cbic":
                value = cbic_score(adj, fitted, dist, lam=lam)
            else:
                value = icl_score(adj, fitted, dist)
        except (FitError, ClusterError) as exc:
            steps.append(StepRecord(m=m, value=-math.inf, status="failed", note=str(exc)))
            continue
        steps.append(StepRecord(m=m, value=value, status="ok"))
        usable.append((m, value))
    k_hat = select_by_score(usable) if usable else None
    return SelectionTrace(method=method, steps=tuple(steps), k_hat=k_hat)
