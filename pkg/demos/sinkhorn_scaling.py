"""Scale a random variance profile to doubly stochastic form.

Builds a symmetric positive matrix V, finds the positive vector psi with
Diag(psi) V Diag(psi) having unit row sums, and checks the guarantees:
the residual meets the tolerance, psi falls inside the closed-form
bounds sqrt(v_min)/(v_max sqrt(n)) <= psi_i <= sqrt(v_max)/(v_min sqrt(n)),
and a second run from a different starting point lands on the same psi.
"""

import math

import numpy as np

from commscale import scaled_matrix, sinkhorn_symmetric

N = 120
SEED = 7


def random_profile(n, rng):
    v = rng.uniform(0.2, 3.0, size=(n, n))
    return (v + v.T) / 2


def main():
    rng = np.random.default_rng(SEED)
    v = random_profile(N, rng)
    result = sinkhorn_symmetric(v, tol=1e-10)
    print(f"n = {N}, converged in {result.iterations} iterations")
    print(f"residual max_i |sum_j V_ij psi_i psi_j - 1| = {result.residual:.3e}")

    stochastic = v * np.outer(result.psi, result.psi)
    print(f"row sums of Diag(psi) V Diag(psi): min {stochastic.sum(axis=1).min():.12f}, "
          f"max {stochastic.sum(axis=1).max():.12f}")
    assert np.allclose(stochastic, scaled_matrix(v, result.psi ** 2))

    lo = math.sqrt(v.min()) / (v.max() * math.sqrt(N))
    hi = math.sqrt(v.max()) / (v.min() * math.sqrt(N))
    print(f"psi range [{result.psi.min():.6f}, {result.psi.max():.6f}] "
          f"inside bounds [{lo:.6f}, {hi:.6f}]: "
          f"{bool(result.psi.min() >= lo and result.psi.max() <= hi)}")

    other = sinkhorn_symmetric(v, tol=1e-10, initial=np.full(N, 0.05))
    print(f"restart from a constant vector agrees to "
          f"{np.abs(result.psi - other.psi).max():.3e}")


if __name__ == "__main__":
    main()
