"""Symmetric scaling of a positive matrix to a doubly stochastic form.

For a symmetric V with positive entries there is a unique positive psi
with sum_i V_ij psi_i psi_j = 1 for every j. The raw fixed-point update
psi <- 1/(V psi) can oscillate between two accumulation points, so the
iteration here takes the geometric mean of the current iterate and the
raw update, which is a contraction on positive matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ScalingResult", "ScalingError", "sinkhorn_symmetric", "scaled_matrix"]


class ScalingError(RuntimeError):
    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(f"{message} (iterations={iterations}, residual={residual:.3e})")
        self.iterations = iterations
        self.residual = residual


@dataclass(frozen=True)
class ScalingResult:
    """Scaling factors psi with convergence diagnostics.

    residual is max_j |sum_i V_ij psi_i psi_j - 1| at the returned psi.
    """

    psi: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        psi = np.array(self.psi, dtype=float)
        psi.flags.writeable = False
        object.__setattr__(self, "psi", psi)


def sinkhorn_symmetric(
    matrix: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 10_000,
    initial: np.ndarray | None = None,
) -> ScalingResult:
    """Solve psi * (V @ psi) = 1 elementwise for positive symmetric V.

    Iterates psi <- sqrt(psi / (V @ psi)) from psi_i = 1/sqrt(row sum)
    (or the given positive ``initial``), stopping when the max row-sum
    residual of Psi V Psi drops to tol. Raises ScalingError with
    diagnostics if max_iter is exhausted. The fixed point is unique, so
    the starting point only affects the iteration count.
    """
    v = np.asarray(matrix, dtype=float)
    n = v.shape[0]
    if v.shape != (n, n):
        raise ValueError("matrix must be square")
    if (v <= 0).any():
        raise ValueError("matrix must have strictly positive entries")
    if not np.allclose(v, v.T, rtol=1e-12, atol=0):
        raise ValueError("matrix must be symmetric")
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = (v + v.T) / 2.0
    if initial is None:
        psi = 1.0 / np.sqrt(v.sum(axis=1))
    else:
        psi = np.array(initial, dtype=float)
        if psi.shape != (n,) or (psi <= 0).any():
            raise ValueError("initial must be a positive length-n vector")
    residual = np.inf
    for iteration in range(max_iter + 1):
        prod = v @ psi
        residual = float(np.abs(psi * prod - 1.0).max())
        if residual <= tol:
            return ScalingResult(psi=psi, iterations=iteration, residual=residual)
        psi = np.sqrt(psi / prod)
    raise ScalingError("scaling did not converge", iterations=max_iter, residual=residual)


def scaled_matrix(matrix: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """S = Psi^{1/2} A Psi^{1/2}, i.e. S_ij = sqrt(psi_i psi_j) * A_ij."""
    psi = np.asarray(psi, dtype=float)
    if (psi <= 0).any():
        raise ValueError("psi must be positive")
    root = np.sqrt(psi)
    return np.asarray(matrix, dtype=float) * np.outer(root, root)
