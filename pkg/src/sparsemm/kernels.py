"""Low level product kernels shared by the algorithms.

``dense_matmul``      schoolbook product of two 2-D arrays over a domain
``strassen_matmul``   Strassen recursion on top of it
``sparse_product``    exact sparse-times-sparse product by enumerating all
                      (i, k, j) triples; its work is sum_k nnz(A[:,k]) * nnz(B[k,:])

Word domains take the fastest exact route available: float64 BLAS while every
partial sum stays below 2**53, int64 below 2**63.  Python-int matrices are
split into signed 16-bit limbs so the bulk of the work still runs in BLAS.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.sparse as sp

from .domains import FLOAT_EXACT, INT64_MAX, IntegerOverflowError, ScalarDomain, obj_array
from .matrix import SparseMatrix

LIMB_BITS = 16
_EXPAND_CHUNK = 1 << 22


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype == object:
        return max(abs(int(v)) for v in a.reshape(-1))
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def ring_zeros(shape, dom: ScalarDomain) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    flat = out.reshape(-1)
    for i in range(flat.size):
        flat[i] = dom.ring.zero
    return out


# ---------------------------------------------------------------- dense


def _word_matmul(X: np.ndarray, Y: np.ndarray, bound: int) -> np.ndarray:
    if bound < FLOAT_EXACT:
        return np.rint(X.astype(np.float64) @ Y.astype(np.float64)).astype(np.int64)
    return X.astype(np.int64) @ Y.astype(np.int64)


def dense_matmul(X: np.ndarray, Y: np.ndarray, dom: ScalarDomain) -> np.ndarray:
    x, y = X.shape
    y2, z = Y.shape
    if y != y2:
        raise ValueError(f"inner dimensions differ: {X.shape} @ {Y.shape}")
    if dom.kind == "ring":
        if y == 0:
            return ring_zeros((x, z), dom)
        C = dom._umul.outer(X[:, 0], Y[0, :])
        for k in range(1, y):
            C = dom._uadd(C, dom._umul.outer(X[:, k], Y[k, :]))
        return C
    if dom.kind == "bigint":
        return object_int_matmul(X, Y)
    bound = _absmax(X) * _absmax(Y) * y
    if bound <= INT64_MAX:
        out = _word_matmul(X, Y, bound)
    elif dom.kind == "zmod":
        # block the inner dimension so each block sum fits, reduce between blocks
        k = dom.modulus
        step = max(1, INT64_MAX // ((k - 1) ** 2) - 1)
        out = np.zeros((x, z), dtype=np.int64)
        for s in range(0, y, step):
            blk = _word_matmul(X[:, s:s + step], Y[s:s + step, :], (k - 1) ** 2 * step)
            out = np.mod(out + np.mod(blk, k), k)
    else:
        exact = object_int_matmul(X.astype(object), Y.astype(object))
        return _back_to_word(exact)
    if dom.kind == "zmod":
        out = np.mod(out, dom.modulus)
    return out


def _back_to_word(a: np.ndarray) -> np.ndarray:
    if a.size and _absmax(a) > INT64_MAX:
        raise IntegerOverflowError("product entry does not fit in int64")
    return a.astype(np.int64)


def _limbs(a: np.ndarray):
    """Signed 16-bit digits: a == sum_t limbs[t] * 2**(16 t)."""
    flat = a.reshape(-1)
    mags = [abs(int(v)) for v in flat]
    sign = np.fromiter(((v > 0) - (v < 0) for v in flat), dtype=np.int64, count=flat.size)
    nbits = max((m.bit_length() for m in mags), default=0)
    nl = max(1, -(-nbits // LIMB_BITS))
    nbytes = nl * LIMB_BITS // 8
    buf = b"".join(m.to_bytes(nbytes, "little") for m in mags)
    digits = np.frombuffer(buf, dtype="<u2").reshape(flat.size, nl).T.astype(np.int64)
    digits *= sign
    return digits.reshape((nl,) + a.shape)


def _from_limbs(cols: list) -> np.ndarray:
    """Inverse of ``_limbs`` for int64 digit planes with arbitrary carries."""
    T = len(cols)
    shape = cols[0].shape
    planes = [c.reshape(-1).copy() for c in cols]
    mask = (1 << LIMB_BITS) - 1
    for t in range(T - 1):
        carry = planes[t] >> LIMB_BITS
        planes[t] &= mask
        planes[t + 1] += carry
    n = planes[0].size
    out = np.empty(n, dtype=object)
    if T > 1:
        low = np.stack(planes[:-1], axis=1).astype("<u2")
        raw = low.tobytes()
        step = 2 * (T - 1)
        shift = LIMB_BITS * (T - 1)
        top = planes[-1].tolist()
        for i in range(n):
            out[i] = int.from_bytes(raw[i * step:(i + 1) * step], "little") + (top[i] << shift)
    else:
        for i, v in enumerate(planes[0].tolist()):
            out[i] = v
    return out.reshape(shape)


def object_int_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Exact product of Python-int matrices."""
    x, y = X.shape
    z = Y.shape[1]
    if x * y * z <= 20000 or y == 0:
        if y == 0:
            out = np.empty((x, z), dtype=object)
            out[...] = 0
            return out
        return np.dot(X.astype(object), Y.astype(object))
    LX = _limbs(X)
    LY = _limbs(Y)
    if y >= 1 << (53 - 2 * LIMB_BITS) or min(len(LX), len(LY)) > 1000:
        return np.dot(X.astype(object), Y.astype(object))
    FX = LX.astype(np.float64)
    FY = LY.astype(np.float64)
    T = len(LX) + len(LY) - 1
    cols = [np.zeros((x, z), dtype=np.int64) for _ in range(T + 1)]
    for t in range(len(LX)):
        if not FX[t].any():
            continue
        for s in range(len(LY)):
            cols[t + s] += np.rint(FX[t] @ FY[s]).astype(np.int64)
    return _from_limbs(cols)


# ---------------------------------------------------------------- Strassen


def strassen_matmul(X: np.ndarray, Y: np.ndarray, dom: ScalarDomain, cutoff: int = 64) -> np.ndarray:
    """Strassen's recursion; needs additive inverses.

    Word domains recurse over the integers on their representatives (and
    reduce at the end for zmod), in int64 when an a-priori growth bound allows
    it and with Python ints otherwise.
    """
    x, y = X.shape
    z = Y.shape[1]
    if dom.kind == "ring":
        if dom.ring.neg is None:
            raise TypeError(f"Strassen needs negation; ring {dom.ring.name} has none")
        ops = _RingOps(dom)
        return _strassen(X, Y, ops, cutoff)
    n = max(x, y, z, 1)
    depth = max(0, math.ceil(math.log2(n / cutoff))) if n > cutoff else 0
    if dom.kind != "bigint":
        bound = _absmax(X) * _absmax(Y) * n * (16 ** depth)
        if bound <= INT64_MAX:
            ops = _IntOps(np.int64, bound)
            out = _strassen(X.astype(np.int64), Y.astype(np.int64), ops, cutoff)
        else:
            ops = _IntOps(object, bound)
            out = _back_to_word(_strassen(X.astype(object), Y.astype(object), ops, cutoff))
        return np.mod(out, dom.modulus) if dom.kind == "zmod" else out
    return _strassen(X.astype(object), Y.astype(object), _IntOps(object, None), cutoff)


class _IntOps:
    def __init__(self, dtype, bound):
        self.dtype = dtype
        self.bound = bound

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def base(self, a, b):
        if self.dtype is object:
            return object_int_matmul(a, b)
        return _word_matmul(a, b, self.bound)

    def zeros(self, shape):
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out[...] = 0
            return out
        return np.zeros(shape, dtype=np.int64)


class _RingOps:
    def __init__(self, dom):
        self.dom = dom

    def add(self, a, b):
        return self.dom._uadd(a, b)

    def sub(self, a, b):
        return self.dom._uadd(a, self.dom._uneg(b))

    def base(self, a, b):
        return dense_matmul(a, b, self.dom)

    def zeros(self, shape):
        return ring_zeros(shape, self.dom)


def _strassen(X, Y, ops, cutoff):
    x, y = X.shape
    z = Y.shape[1]
    if min(x, y, z) <= cutoff:
        return ops.base(X, Y)
    # pad every dimension to even
    px, py, pz = x + (x & 1), y + (y & 1), z + (z & 1)
    if (px, py) != (x, y):
        Xp = ops.zeros((px, py))
        Xp[:x, :y] = X
        X = Xp
    if (py, pz) != (y, z):
        Yp = ops.zeros((py, pz))
        Yp[:y, :z] = Y
        Y = Yp
    hx, hy, hz = px // 2, py // 2, pz // 2
    A11, A12, A21, A22 = X[:hx, :hy], X[:hx, hy:], X[hx:, :hy], X[hx:, hy:]
    B11, B12, B21, B22 = Y[:hy, :hz], Y[:hy, hz:], Y[hy:, :hz], Y[hy:, hz:]
    add, sub = ops.add, ops.sub
    M1 = _strassen(add(A11, A22), add(B11, B22), ops, cutoff)
    M2 = _strassen(add(A21, A22), B11, ops, cutoff)
    M3 = _strassen(A11, sub(B12, B22), ops, cutoff)
    M4 = _strassen(A22, sub(B21, B11), ops, cutoff)
    M5 = _strassen(add(A11, A12), B22, ops, cutoff)
    M6 = _strassen(sub(A21, A11), add(B11, B12), ops, cutoff)
    M7 = _strassen(sub(A12, A22), add(B21, B22), ops, cutoff)
    C = ops.zeros((px, pz))
    C[:hx, :hz] = add(sub(add(M1, M4), M5), M7)
    C[:hx, hz:] = add(M3, M5)
    C[hx:, :hz] = add(M2, M4)
    C[hx:, hz:] = add(add(sub(M1, M2), M3), M6)
    return C[:x, :z]


# ---------------------------------------------------------------- sparse


def expansion_work(A: SparseMatrix, B: SparseMatrix) -> int:
    """Number of (i, k, j) triples enumerated by ``sparse_product``."""
    return int(np.dot(A.col_counts, B.row_counts))


def sparse_product(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    """Exact product by enumerating every contributing triple."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    dom = A.domain
    x, z = A.shape[0], B.shape[1]
    if A.nnz == 0 or B.nnz == 0:
        return SparseMatrix.zeros((x, z), dom)
    if dom.is_word:
        inner = int(min(A.row_counts.max(), B.col_counts.max()))
        if _absmax(A.values) * _absmax(B.values) * inner <= INT64_MAX:
            return _scipy_product(A, B)
    return _expand_product(A, B)


def _scipy_product(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    dom = A.domain
    x, z = A.shape[0], B.shape[1]
    a = sp.csr_matrix((A.values, A.cols, A.row_ptr), shape=A.shape)
    b = sp.csr_matrix((B.values, B.cols, B.row_ptr), shape=B.shape)
    p = (a @ b).tocsr()
    p.sort_indices()
    vals = p.data.astype(np.int64)
    rows = np.repeat(np.arange(x, dtype=np.int64), np.diff(p.indptr))
    cols = p.indices.astype(np.int64)
    if dom.kind == "zmod":
        vals = np.mod(vals, dom.modulus)
    keep = vals != 0
    return SparseMatrix((x, z), rows[keep], cols[keep], vals[keep], dom)


def _expand_product(A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
    dom = A.domain
    x, z = A.shape[0], B.shape[1]
    At = A.transpose()
    col_ptr = At.row_ptr
    cnt = A.col_counts[B.rows]
    ends = np.cumsum(cnt)
    total = int(ends[-1]) if len(ends) else 0
    parts_r, parts_c, parts_v = [], [], []
    lo = 0
    word = dom.is_word
    calc = dom if not word else None
    while lo < B.nnz:
        base = int(ends[lo - 1]) if lo else 0
        hi = int(np.searchsorted(ends, base + _EXPAND_CHUNK, side="right"))
        hi = max(hi, lo + 1)
        c = cnt[lo:hi]
        n = int(c.sum())
        if n:
            bidx = np.repeat(np.arange(lo, hi), c)
            starts = np.repeat(np.cumsum(c) - c, c)
            apos = col_ptr[B.rows[bidx]] + (np.arange(n) - starts)
            av, bv = At.values[apos], B.values[bidx]
            if word:
                v = av.astype(object) * bv.astype(object)
            else:
                v = calc.mul(av, bv)
            parts_r.append(At.cols[apos])
            parts_c.append(B.cols[bidx])
            parts_v.append(v)
        lo = hi
    if not parts_r:
        return SparseMatrix.zeros((x, z), dom)
    rows = np.concatenate(parts_r)
    cols = np.concatenate(parts_c)
    vals = np.concatenate(parts_v) if len(parts_v) > 1 else parts_v[0]
    if word:
        # exact Python-int accumulation, then back to the checked word domain
        from .domains import BIGINT

        big = SparseMatrix.from_arrays((x, z), rows, cols, vals, BIGINT, validate=False)
        vals = big.values
        if dom.kind == "zmod":
            vals = np.array([v % dom.modulus for v in vals], dtype=object)
        out = _back_to_word(vals) if vals.size else np.zeros(0, np.int64)
        keep = out != 0
        return SparseMatrix((x, z), big.rows[keep], big.cols[keep], out[keep], dom)
    return SparseMatrix.from_arrays((x, z), rows, cols, vals, dom, validate=False)
