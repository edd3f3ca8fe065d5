"""Monte-Carlo accuracy experiments and the Les Miserables study.

run_experiment draws replicate networks from a simulation model and
records how often each selector recovers the true community count.
Replicate seeds derive from (base seed, K, replicate index) only, so the
sampled networks never change when methods are added or reordered.
"""

from __future__ import annotations

import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .model import EdgeDistribution, make_rng, mean_matrix, sample_network, simulation_params
from .network import WeightedAdjacency, binarize, regularize
from .selection import score_select, svps_select

__all__ = [
    "MethodSpec",
    "ExperimentConfig",
    "AccuracyTable",
    "LesmisTable",
    "parse_config",
    "run_experiment",
    "run_lesmis",
    "emit_csv",
]


@dataclass(frozen=True)
class MethodSpec:
    """One selector variant: svps with an epsilon, or cbic/icl with lambda."""

    selector: str
    clusterer: str = "score"
    epsilon: float = 0.05
    lam: float = 1.0

    def __post_init__(self):
        if self.selector not in ("svps", "cbic", "icl"):
            raise ValueError(f"unknown selector {self.selector!r}")
        if self.clusterer not in ("score", "rsc"):
            raise ValueError(f"unknown clusterer {self.clusterer!r}")

    @property
    def label(self) -> str:
        if self.selector == "svps":
            return f"svps-{self.clusterer}-eps{self.epsilon:g}"
        if self.selector == "cbic" and self.lam != 1.0:
            return f"cbic-{self.clusterer}-lam{self.lam:g}"
        return f"{self.selector}-{self.clusterer}"


@dataclass(frozen=True)
class ExperimentConfig:
    distribution: EdgeDistribution
    rho: float
    r: float
    k_list: tuple[int, ...]
    n_all: tuple[int, ...]
    methods: tuple[MethodSpec, ...]
    replicates: int = 100
    seed: int = 0
    zero_diagonal: bool = False

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if not self.methods:
            raise ValueError("need at least one method")
        if max(self.k_list) > len(self.n_all):
            raise ValueError("k_list exceeds available block sizes")
        if self.distribution.kind == "binomial":
            # crude mean cap check: max theta in the mixture is 1.5
            peak = self.rho * (1 + self.r) * 1.5 * 1.5
            if peak > self.distribution.trials:
                raise ValueError(f"binomial mean cap violated: peak mean {peak:g}")


@dataclass(frozen=True)
class AccuracyTable:
    header = ("K", "method", "accuracy", "replicates", "mean_khat", "failures")
    rows: tuple[tuple, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class LesmisTable:
    header = ("clusterer", "selector", "variant", "k_hat")
    rows: tuple[tuple, ...] = field(default_factory=tuple)


def _parse_method(tokens, lineno) -> MethodSpec:
    if len(tokens) < 2:
        raise ValueError(f"line {lineno}: method needs 'selector clusterer [key=value]'")
    kwargs = {"selector": tokens[0], "clusterer": tokens[1]}
    for tok in tokens[2:]:
        key, _, value = tok.partition("=")
        if key == "epsilon":
            kwargs["epsilon"] = float(value)
        elif key == "lambda":
            kwargs["lam"] = float(value)
        else:
            raise ValueError(f"line {lineno}: unknown method option {tok!r}")
    return MethodSpec(**kwargs)


def parse_config(source) -> ExperimentConfig:
    """Read a key=value experiment config.

    Recognized keys: distribution, rho, r, k_list, n_all, replicates,
    seed, zero_diagonal, and one 'method = selector clusterer [...]'
    line per method. '#' starts a comment.
    """
    stream = source if hasattr(source, "read") else open(source, "r", encoding="utf-8")
    scalars = {}
    methods = []
    try:
        for lineno, raw in enumerate(stream, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key = key.strip()
            value = value.strip()
            if key == "method":
                methods.append(_parse_method(value.split(), lineno))
            else:
                scalars[key] = value
    finally:
        if stream is not source:
            stream.close()
    missing = {"distribution", "rho", "r", "k_list", "n_all"} - set(scalars)
    if missing:
        raise ValueError(f"config is missing keys: {sorted(missing)}")
    return ExperimentConfig(
        distribution=EdgeDistribution(scalars["distribution"]),
        rho=float(scalars["rho"]),
        r=float(scalars["r"]),
        k_list=tuple(int(t) for t in scalars["k_list"].split(",")),
        n_all=tuple(int(t) for t in scalars["n_all"].split(",")),
        methods=tuple(methods),
        replicates=int(scalars.get("replicates", "100")),
        seed=int(scalars.get("seed", "0")),
        zero_diagonal=scalars.get("zero_diagonal", "false").lower() in ("true", "1", "yes"),
    )


def _method_seed(base_seed: int, k: int, rep: int, label: str) -> int:
    ss = np.random.SeedSequence((base_seed, k, rep, zlib.crc32(label.encode())))
    return int(ss.generate_state(1)[0])


def _replicate(config: ExperimentConfig, k: int, rep: int) -> dict:
    """Sample one network and run every method on it."""
    rng = make_rng(np.random.SeedSequence((config.seed, k, rep)))
    model = simulation_params(k, config.rho, config.r, config.n_all, rng)
    adj = sample_network(
        mean_matrix(model), config.distribution, rng, zero_diagonal=config.zero_diagonal
    )
    out = {}
    for spec in config.methods:
        seed = _method_seed(config.seed, k, rep, spec.label)
        try:
            if spec.selector == "svps":
                trace = svps_select(
                    adj,
                    epsilon=spec.epsilon,
                    m_max=max(12, k + 4),
                    clusterer=spec.clusterer,
                    seed=seed,
                )
            else:
                trace = score_select(
                    adj,
                    dist=config.distribution,
                    method=spec.selector,
                    m_range=range(1, k + 5),
                    clusterer=spec.clusterer,
                    seed=seed,
                    lam=spec.lam,
                )
            out[spec.label] = trace.k_hat
        except Exception:
            out[spec.label] = None
    return out


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> AccuracyTable:
    """Accuracy of every method at every K over seeded replicates.

    Parallel and serial execution give identical tables; results are
    aggregated in (K, replicate) order regardless of completion order.
    """
    tasks = [(k, rep) for k in config.k_list for rep in range(config.replicates)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_replicate_star, [(config, k, rep) for k, rep in tasks], chunksize=4))
    else:
        results = [_replicate(config, k, rep) for k, rep in tasks]
    by_key = dict(zip(tasks, results))
    rows = []
    for k in config.k_list:
        for spec in sorted(config.methods, key=lambda s: s.label):
            estimates = [by_key[(k, rep)][spec.label] for rep in range(config.replicates)]
            got = [e for e in estimates if e is not None]
            hits = sum(1 for e in got if e == k)
            failures = config.replicates - len(got)
            mean_khat = f"{np.mean(got):.6g}" if got else ""
            rows.append((k, spec.label, hits / config.replicates, config.replicates, mean_khat, failures))
    return AccuracyTable(rows=tuple(rows))


def _replicate_star(args):
    return _replicate(*args)


def run_lesmis(
    adj: WeightedAdjacency,
    tau_list=(0.05, 0.1, 0.25, 0.5),
    seed: int = 0,
    epsilon: float = 0.05,
    m_max: int = 12,
    score_m_range=range(1, 11),
) -> LesmisTable:
    """The weighted-network study grid.

    For each clusterer: the sequential test on the regularized matrix at
    every tau, then CBIC and ICL on the raw weighted matrix with poisson
    likelihood, then CBIC and ICL on the binarized matrix with bernoulli
    likelihood. Cells that fail record an empty estimate.
    """
    rows = []
    for clusterer in ("score", "rsc"):
        for tau in tau_list:
            try:
                trace = svps_select(
                    regularize(adj, tau),
                    epsilon=epsilon,
                    m_max=m_max,
                    clusterer=clusterer,
                    seed=seed,
                )
                k_hat = trace.k_hat
            except Exception:
                k_hat = None
            rows.append((clusterer, "svps", f"tau={tau:g}", "" if k_hat is None else k_hat))
        for selector in ("cbic", "icl"):
            try:
                trace = score_select(
                    adj, dist="poisson", method=selector, m_range=score_m_range,
                    clusterer=clusterer, seed=seed,
                )
                k_hat = trace.k_hat
            except Exception:
                k_hat = None
            rows.append((clusterer, selector, "weighted", "" if k_hat is None else k_hat))
    flat = binarize(adj)
    for selector in ("cbic", "icl"):
        try:
            trace = score_select(
                flat, dist="bernoulli", method=selector, m_range=score_m_range,
                clusterer="score", seed=seed,
            )
            k_hat = trace.k_hat
        except Exception:
            k_hat = None
        rows.append(("score", selector, "binarized", "" if k_hat is None else k_hat))
    return LesmisTable(rows=tuple(rows))


def emit_csv(table, sink) -> None:
    """Write a table with a stable header and row order, RFC-4180 quoting."""
    import csv

    stream, close = (sink, False) if hasattr(sink, "write") else (open(sink, "w", encoding="utf-8", newline=""), True)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow(row)
    finally:
        if close:
            stream.close()
