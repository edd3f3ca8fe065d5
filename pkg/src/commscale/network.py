"""Weighted network container and edge-list I/O.

Networks are dense symmetric nonnegative matrices. Everything in this
package runs at n of a few hundred, where dense storage is both simpler
and faster than sparse.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WeightedAdjacency",
    "EdgeListFormat",
    "EdgeListError",
    "load_edge_list",
    "write_edge_list",
    "regularize",
    "degrees",
    "binarize",
]


class EdgeListError(ValueError):
    """Malformed or inconsistent edge-list input."""


@dataclass(frozen=True)
class WeightedAdjacency:
    """Symmetric nonnegative weight matrix with optional node names.

    Parameters
    ----------
    weights : (n, n) array
        Symmetric, entrywise nonnegative and finite, n >= 2. The stored
        array is a read-only copy.
    node_names : tuple of str, optional
        Original node identifiers, index-aligned with the matrix.
    """

    weights: np.ndarray
    node_names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError(f"weights must be square, got shape {w.shape}")
        if w.shape[0] < 2:
            raise ValueError("need at least 2 nodes")
        if not np.isfinite(w).all():
            raise ValueError("weights must be finite")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be exactly symmetric")
        if self.node_names is not None and len(self.node_names) != w.shape[0]:
            raise ValueError("node_names length does not match matrix size")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class EdgeListFormat:
    """Edge-list conventions: node-id base and duplicate handling.

    indexing : 0 or 1, the base of node ids in the file.
    accumulate : duplicate records sum their weights when True, are
        rejected when False.
    """

    indexing: int = 0
    accumulate: bool = True

    def __post_init__(self):
        if self.indexing not in (0, 1):
            raise ValueError("indexing must be 0 or 1")


def _open_text(source):
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", encoding="utf-8"), True


def load_edge_list(source, fmt: EdgeListFormat = EdgeListFormat(), n: int | None = None) -> WeightedAdjacency:
    """Read a whitespace-separated "u v w" edge list into a matrix.

    Lines starting with '#' and blank lines are skipped. Node ids must be
    integers in the file's declared base; they are relabeled to 0..n-1
    preserving numeric order, and the original ids are kept as node
    names. Self-loop records set the diagonal once (no mirror
    double-counting). Pass ``n`` to declare the node count up front, in
    which case out-of-range ids are an error.
    """
    stream, close = _open_text(source)
    try:
        records = []
        for lineno, raw in enumerate(stream, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise EdgeListError(f"line {lineno}: expected 'u v w', got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2])
            except ValueError:
                raise EdgeListError(f"line {lineno}: could not parse {line!r}") from None
            if not np.isfinite(w):
                raise EdgeListError(f"line {lineno}: non-finite weight")
            if w < 0:
                raise EdgeListError(f"line {lineno}: negative weight {w}")
            records.append((lineno, u - fmt.indexing, v - fmt.indexing, w))
    finally:
        if close:
            stream.close()
    if not records:
        raise EdgeListError("empty edge list")

    ids = sorted({u for _, u, _, _ in records} | {v for _, _, v, _ in records})
    if n is not None:
        bad = [i for i in ids if not 0 <= i < n]
        if bad:
            raise EdgeListError(f"node id {bad[0] + fmt.indexing} out of declared range")
        index = {i: i for i in range(n)}
        size = n
    else:
        if ids[0] < 0:
            raise EdgeListError(f"node id {ids[0] + fmt.indexing} below indexing base {fmt.indexing}")
        contiguous = ids == list(range(ids[-1] + 1))
        index = {orig: k for k, orig in enumerate(ids)} if not contiguous else {i: i for i in range(ids[-1] + 1)}
        size = ids[-1] + 1 if contiguous else len(ids)
    if size < 2:
        raise EdgeListError("need at least 2 nodes")

    w = np.zeros((size, size))
    seen = set()
    for lineno, u, v, val in records:
        i, j = index[u], index[v]
        key = (min(i, j), max(i, j))
        if not fmt.accumulate and key in seen:
            raise EdgeListError(f"line {lineno}: duplicate edge {u + fmt.indexing} {v + fmt.indexing}")
        seen.add(key)
        if i == j:
            w[i, i] += val
        else:
            w[i, j] += val
            w[j, i] += val
    names = tuple(str(orig + fmt.indexing) for orig in sorted(index, key=index.get))
    return WeightedAdjacency(w, node_names=names)


def write_edge_list(adj: WeightedAdjacency, sink, fmt: EdgeListFormat = EdgeListFormat()) -> None:
    """Write the nonzero upper triangle (incl. diagonal) as "u v w" lines.

    Weights are written with repr-roundtrip precision so that
    load(write(load(x))) is bit-identical to load(x).
    """
    stream, close = (sink, False) if hasattr(sink, "write") else (open(sink, "w", encoding="utf-8"), True)
    try:
        w = adj.weights
        iu, ju = np.nonzero(np.triu(w))
        for i, j in zip(iu.tolist(), ju.tolist()):
            stream.write(f"{i + fmt.indexing} {j + fmt.indexing} {float(w[i, j])!r}\n")
    finally:
        if close:
            stream.close()


def regularize(adj: WeightedAdjacency, tau: float) -> WeightedAdjacency:
    """Add tau to every entry (tau * all-ones matrix), tau >= 0."""
    if tau < 0:
        raise ValueError(f"tau must be nonnegative, got {tau}")
    if tau == 0:
        return adj
    return WeightedAdjacency(adj.weights + tau, node_names=adj.node_names)


def degrees(adj: WeightedAdjacency) -> np.ndarray:
    """Row sums of the weight matrix, diagonal included."""
    return adj.weights.sum(axis=1)


def binarize(adj: WeightedAdjacency) -> WeightedAdjacency:
    """Replace every positive weight with 1."""
    return WeightedAdjacency((adj.weights > 0).astype(float), node_names=adj.node_names)
