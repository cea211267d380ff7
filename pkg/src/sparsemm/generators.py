"""Seeded random instances for tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .domains import BOOL, INT, NONNEG, ScalarDomain
from .matrix import SparseMatrix


def random_values(rng: np.random.Generator, n: int, domain: ScalarDomain, vmax: int = 9):
    k = domain.kind
    if k == "bool":
        return np.ones(n, dtype=np.int64)
    if k == "nonneg":
        return rng.integers(1, vmax + 1, size=n)
    if k == "int":
        v = rng.integers(1, vmax + 1, size=n)
        return v * rng.choice([-1, 1], size=n)
    if k == "bigint":
        return [int(a) * (1 << 70) + int(b) for a, b in
                zip(rng.integers(-vmax, vmax + 1, size=n), rng.integers(-vmax, vmax + 1, size=n))]
    if k == "zmod":
        return rng.integers(1, domain.modulus, size=n)
    raise ValueError(f"no value generator for {domain.name}")


def random_sparse(shape, density: float, domain: ScalarDomain, seed=None) -> SparseMatrix:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x, y = shape
    mask = rng.random((x, y)) < density
    r, c = np.nonzero(mask)
    return SparseMatrix.from_arrays((x, y), r, c, random_values(rng, len(r), domain), domain)


def random_pair(x, y, z, density, domain, seed=None):
    rng = np.random.default_rng(seed)
    return random_sparse((x, y), density, domain, rng), random_sparse((y, z), density, domain, rng)


def planted_cancellation(x: int, y: int, z: int, density: float = 0.2, seed=None,
                         domain: ScalarDomain = INT):
    """Row 2i+1 of A is minus row 2i, so adding rows in pairs cancels exactly."""
    rng = np.random.default_rng(seed)
    x = max(2, x + (x & 1))
    half = random_sparse((x // 2, y), density, domain, rng)
    rows = np.concatenate([2 * half.rows, 2 * half.rows + 1])
    cols = np.concatenate([half.cols, half.cols])
    vals = np.concatenate([half.values, -half.values])
    A = SparseMatrix.from_arrays((x, y), rows, cols, vals, domain)
    B = random_sparse((y, z), density, domain, rng)
    return A, B


def fully_sparse(m: int, seed=None, degree: int = 2, domain: ScalarDomain = BOOL):
    """Square n x n pair with ``degree`` entries per row; m_in = m and
    m_out close to m for degree 2."""
    rng = np.random.default_rng(seed)
    n = max(1, m // (2 * degree))

    def one():
        rows = np.repeat(np.arange(n), degree)
        cols = np.concatenate([rng.choice(n, size=degree, replace=False) for _ in range(n)])
        return SparseMatrix.from_arrays((n, n), rows, cols,
                                        random_values(rng, len(rows), domain), domain)

    return one(), one()


def skewed_degree(n: int, m: int, seed=None, exponent: float = 1.5,
                  domain: ScalarDomain = NONNEG):
    """Column/row popularity drawn from a power law; a few heavy indices."""
    rng = np.random.default_rng(seed)
    w = 1.0 / np.arange(1, n + 1) ** exponent
    w /= w.sum()

    def one():
        rows = rng.integers(0, n, size=m // 2)
        cols = rng.choice(n, size=m // 2, p=w)
        return SparseMatrix.from_arrays((n, n), rows, cols,
                                        random_values(rng, len(rows), domain), domain)

    A = one()
    Bt = one()
    return A, Bt.transpose()


def rank_one_dense(n: int, seed=None, domain: ScalarDomain = NONNEG):
    """A single column times a single row: m_in = 2n, m_out = n**2."""
    rng = np.random.default_rng(seed)
    idx = np.arange(n)
    A = SparseMatrix.from_arrays((n, 1), idx, np.zeros(n, np.int64),
                                 random_values(rng, n, domain), domain)
    B = SparseMatrix.from_arrays((1, n), np.zeros(n, np.int64), idx,
                                 random_values(rng, n, domain), domain)
    return A, B
