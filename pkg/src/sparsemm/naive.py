"""Reference products and randomized verification.

``naive_multiply`` is the ground-truth oracle.  It is deliberately plain:
Python dictionaries and scalar domain operations, nothing shared with the
vectorized kernels.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .domains import ScalarDomain
from .kernels import dense_matmul, strassen_matmul
from .matrix import DenseMatrix, SparseMatrix


def _check_compat(A, B):
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    if A.domain != B.domain:
        raise ValueError(f"domains differ: {A.domain.name} vs {B.domain.name}")


def naive_multiply(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    """Row-by-row accumulation, one scalar at a time."""
    _check_compat(A, B)
    dom = A.domain
    brows = defaultdict(list)
    for k, j, v in B.to_triplets():
        brows[k].append((j, v))
    acc = {}
    for i, k, a in A.to_triplets():
        for j, b in brows.get(k, ()):
            p = dom.s_mul(a, b)
            key = (i, j)
            acc[key] = dom.s_add(acc[key], p) if key in acc else p
    if dom.kind == "bool":
        trip = [(i, j, 1) for (i, j), v in acc.items() if v != 0]
    else:
        trip = [(i, j, v) for (i, j), v in acc.items() if not dom.s_is_zero(v)]
    return SparseMatrix.from_triplets(trip, A.shape[0], B.shape[1], dom)


def dense_multiply(A: DenseMatrix, B: DenseMatrix, backend: str = "naive",
                   cutoff: int = 64) -> DenseMatrix:
    """Dense product with the schoolbook or Strassen backend."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    dom = A.domain
    cd = dom.compute_domain
    if backend == "naive":
        out = dense_matmul(A.data, B.data, cd)
    elif backend == "strassen":
        if cd.kind in ("nonneg",):
            from .domains import INT

            out = strassen_matmul(A.data, B.data, INT, cutoff)
        else:
            out = strassen_matmul(A.data, B.data, cd, cutoff)
    else:
        raise ValueError(f"unknown dense backend {backend!r}")
    if dom.kind == "bool":
        out = (out != 0).astype(np.int64)
    return DenseMatrix(out, dom)


def _matvec(M: SparseMatrix, v: np.ndarray, dom: ScalarDomain) -> np.ndarray:
    """M @ v for an x-by-y sparse M and a length-y vector."""
    x = M.shape[0]
    if dom.kind == "ring":
        from .kernels import ring_zeros

        out = ring_zeros(x, dom)
    else:
        out = np.zeros(x, dtype=dom.dtype) if dom.dtype != object else np.array([0] * x, dtype=object)
    if M.nnz == 0:
        return out
    prod = dom.mul(M.values, v[M.cols])
    rows_present = np.flatnonzero(M.row_counts)
    sums = dom.sum_segments(prod, M.row_ptr[rows_present])
    out[rows_present] = sums
    return out


def freivalds_verify(A: SparseMatrix, B: SparseMatrix, C: SparseMatrix,
                     trials: int = 20, seed: int | None = None) -> bool:
    """Randomized check of A B == C with one-sided error 2**-trials.

    Needs a domain with subtraction (integers, Z/k, rings with negation).
    Random vectors have 0/1 entries; each trial costs O(nnz(A)+nnz(B)+nnz(C)).
    """
    _check_compat(A, B)
    dom = A.domain
    if C.domain != dom or C.shape != (A.shape[0], B.shape[1]):
        raise ValueError("C does not match the product's shape or domain")
    if dom.kind in ("bool",):
        raise ValueError("Freivalds needs an integer or field domain, not bool")
    calc = dom
    if dom.kind == "nonneg":
        from .domains import INT

        calc = INT
    one = dom.ring.one if dom.kind == "ring" else 1
    if dom.kind == "ring" and one is None:
        raise ValueError("ring needs a unit element for verification")
    rng = np.random.default_rng(seed)
    z = B.shape[1]
    for _ in range(trials):
        bits = rng.integers(0, 2, size=z)
        if dom.kind == "ring":
            from .domains import obj_array

            v = obj_array([one if b else dom.ring.zero for b in bits])
        elif dom.dtype == object:
            v = np.array([int(b) for b in bits], dtype=object)
        else:
            v = bits.astype(np.int64)
        left = _matvec(A, _matvec(B, v, calc), calc)
        right = _matvec(C, v, calc)
        if dom.kind == "ring":
            diff = calc._uadd(left, calc._uneg(right)) if calc.ring.neg else None
            if diff is None:
                if not all(a == b for a, b in zip(left, right)):
                    return False
            elif not calc.zero_mask(diff).all():
                return False
        elif dom.dtype == object:
            if any(a != b for a, b in zip(left, right)):
                return False
        elif not np.array_equal(left, right):
            return False
    return True
