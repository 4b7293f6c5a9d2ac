"""Seeded matrix samplers for the property suites.

The samplers favour continuous entry distributions: defective peripheral
eigenvalues form a measure-zero set, so sampled matrices stay numerically
diagonalizable at the periphery (permutation matrices, which are exactly
normal, are the one discrete ingredient)."""
from __future__ import annotations

import numpy as np

from .lattice import NormTag
from .operators import OperatorMatrix, op, spectral_radius

__all__ = [
    "random_nonneg",
    "random_stochastic",
    "random_markov_reducible",
    "plant_jordan",
]


def _permutation(rng: np.random.Generator, n: int) -> np.ndarray:
    P = np.zeros((n, n))
    P[np.arange(n), rng.permutation(n)] = 1.0
    return P


def random_nonneg(rng: np.random.Generator, n: int,
                  normalize: bool = False) -> OperatorMatrix:
    """Random entrywise-nonnegative matrix from a structural mixture:
    dense, sparse, weighted permutation, or block diagonal."""
    kind = rng.integers(0, 4)
    if kind == 0:
        A = np.abs(rng.standard_normal((n, n)))
    elif kind == 1:
        A = np.abs(rng.standard_normal((n, n)))
        A *= rng.random((n, n)) < 0.4
    elif kind == 2:
        A = _permutation(rng, n) * (0.2 + rng.random((n, 1)))
    else:
        k = int(rng.integers(1, n)) if n > 1 else 1
        A = np.zeros((n, n))
        A[:k, :k] = np.abs(rng.standard_normal((k, k)))
        A[k:, k:] = np.abs(rng.standard_normal((n - k, n - k)))
    T = op(A, NormTag.SUP)
    if normalize:
        r = spectral_radius(T)
        if r > 0:
            T = op(A / r, NormTag.SUP)
    return T


def random_nonneg_gapped(rng: np.random.Generator, n: int,
                         gap: float = 0.05) -> OperatorMatrix:
    """Random nonnegative matrix, normalized to spectral radius 1, with no
    eigenvalue modulus inside (1-gap, 1).

    Finite-prefix boundedness probes cannot distinguish a slow transient
    (subdominant modulus just under 1) from genuine polynomial growth, so
    suites that compare probe verdicts against pole orders condition the
    sample on a modulus gap."""
    for _ in range(1000):
        T = random_nonneg(rng, n)
        w = np.abs(np.linalg.eigvals(T.entries))
        r = w.max()
        if r <= 1e-10:
            continue
        w = np.sort(w / r)
        inside = w[(w < 1.0 - 1e-9) & (w > 1.0 - gap)]
        if inside.size == 0:
            return op(T.entries / r, NormTag.SUP)
    raise RuntimeError("gap rejection did not terminate")


def random_stochastic(rng: np.random.Generator, n: int) -> OperatorMatrix:
    """Random row-stochastic matrix: dense Dirichlet rows, sparse rows,
    or a permutation (periodic chains exercise the full peripheral group)."""
    kind = rng.integers(0, 3)
    if kind == 0:
        A = rng.dirichlet(np.ones(n), size=n)
    elif kind == 1:
        A = np.zeros((n, n))
        for i in range(n):
            k = int(rng.integers(1, n + 1))
            cols = rng.choice(n, size=k, replace=False)
            A[i, cols] = rng.dirichlet(np.ones(k))
    else:
        A = _permutation(rng, n)
    return op(A, NormTag.SUP)


def random_markov_reducible(rng: np.random.Generator, n: int,
                            blocks: int = 2) -> OperatorMatrix:
    """Block-diagonal Markov matrix; its fixed space has dimension >= blocks,
    which gives the fixed-space suites something nontrivial to order."""
    sizes = []
    left = n
    for b in range(blocks - 1):
        hi = left - (blocks - 1 - b)
        s = int(rng.integers(1, max(2, hi + 1)))
        sizes.append(s)
        left -= s
    sizes.append(left)
    A = np.zeros((n, n))
    pos = 0
    for s in sizes:
        A[pos : pos + s, pos : pos + s] = rng.dirichlet(np.ones(s), size=s)
        pos += s
    return op(A, NormTag.SUP)


def plant_jordan(rng: np.random.Generator, n: int, m: int,
                 lam: float = 1.0) -> OperatorMatrix:
    """Similarity transform of a Jordan block of size m at lam padded with
    strictly smaller random eigenvalues; spectral radius is |lam|."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    J = np.zeros((n, n))
    for i in range(m):
        J[i, i] = lam
        if i + 1 < m:
            J[i, i + 1] = 1.0
    if n > m:
        J[m:, m:] = np.diag(rng.uniform(0.1, 0.8, size=n - m))
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return op(Q @ J @ Q.T, NormTag.SUP)
