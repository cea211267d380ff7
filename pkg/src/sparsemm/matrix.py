"""Sparse and dense matrix containers.

``SparseMatrix`` is coordinate storage kept in canonical form: entries sorted
by (row, col), no duplicate coordinates, no stored zeros.  Indices are
0-based.  Construction through ``from_arrays`` / ``from_triplets`` sums
duplicates and drops zeros; ``_trusted`` skips that for arrays already known
to be canonical.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable

import numpy as np

from .domains import BOOL, ScalarDomain, obj_array


def _as_index(a) -> np.ndarray:
    arr = np.asarray(a)
    if arr.size and arr.dtype.kind not in "iu":
        if arr.dtype == object or arr.dtype.kind == "f":
            if not all(float(v).is_integer() for v in arr.reshape(-1)):
                raise ValueError("indices must be integers")
        else:
            raise ValueError("indices must be integers")
    return arr.astype(np.int64).reshape(-1)


def canonical_order(rows: np.ndarray, cols: np.ndarray, ncols: int) -> np.ndarray:
    if ncols > 0 and rows.size and int(rows.max()) < (np.iinfo(np.int64).max // max(ncols, 1)) - 1:
        return np.argsort(rows * ncols + cols, kind="stable")
    return np.lexsort((cols, rows))


class SparseMatrix:
    """Sparse matrix over a scalar domain, canonical COO layout."""

    __slots__ = ("shape", "rows", "cols", "values", "domain", "__dict__")

    def __init__(self, shape, rows, cols, values, domain: ScalarDomain):
        # callers must pass canonical arrays; use from_arrays otherwise
        self.shape = (int(shape[0]), int(shape[1]))
        self.rows = rows
        self.cols = cols
        self.values = values
        self.domain = domain

    # ------------------------------------------------------------ builders
    @classmethod
    def from_arrays(cls, shape, rows, cols, values, domain: ScalarDomain,
                    validate: bool = True) -> "SparseMatrix":
        x, y = int(shape[0]), int(shape[1])
        if x < 0 or y < 0:
            raise ValueError("negative dimension")
        rows = _as_index(rows)
        cols = _as_index(cols)
        if validate:
            values = domain.asarray(values)
        if not (len(rows) == len(cols) == len(values)):
            raise ValueError("rows, cols and values must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= x or cols.min() < 0 or cols.max() >= y:
                raise IndexError("entry index outside the matrix shape")
        order = canonical_order(rows, cols, y)
        rows, cols, values = rows[order], cols[order], values[order]
        if rows.size:
            new = np.ones(len(rows), dtype=bool)
            new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            if not new.all():
                starts = np.flatnonzero(new)
                cd = domain.compute_domain if domain.kind == "bool" else domain
                values = cd.sum_segments(values, starts)
                rows, cols = rows[starts], cols[starts]
                if domain.kind == "bool":
                    values = np.minimum(values, 1)
            keep = ~domain.zero_mask(values)
            if not keep.all():
                rows, cols, values = rows[keep], cols[keep], values[keep]
        return cls((x, y), rows, cols, values, domain)

    @classmethod
    def from_triplets(cls, triplets: Iterable, nrows: int, ncols: int,
                      domain: ScalarDomain) -> "SparseMatrix":
        """Build from ``(i, j, v)`` triples (0-based); duplicates are summed."""
        trip = list(triplets)
        rows = [t[0] for t in trip]
        cols = [t[1] for t in trip]
        vals = [t[2] for t in trip]
        return cls.from_arrays((nrows, ncols), rows, cols, vals, domain)

    @classmethod
    def _trusted(cls, shape, rows, cols, values, domain) -> "SparseMatrix":
        return cls(shape, rows, cols, values, domain)

    @classmethod
    def zeros(cls, shape, domain: ScalarDomain) -> "SparseMatrix":
        e = np.zeros(0, dtype=np.int64)
        return cls(shape, e, e.copy(), np.zeros(0, dtype=domain.dtype), domain)

    @classmethod
    def from_dense(cls, arr, domain: ScalarDomain) -> "SparseMatrix":
        arr = np.asarray(arr, dtype=domain.dtype if domain.kind != "ring" else object)
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        x, y = arr.shape
        flat = arr.reshape(-1)
        if domain.kind == "ring":
            nz = ~domain.zero_mask(flat)
        else:
            nz = np.asarray([v != 0 for v in flat], dtype=bool) if flat.dtype == object else flat != 0
        idx = np.flatnonzero(nz)
        return cls.from_arrays((x, y), idx // max(y, 1), idx % max(y, 1), flat[idx], domain)

    # ------------------------------------------------------------ basics
    @property
    def nnz(self) -> int:
        return int(self.rows.size)

    def __repr__(self):
        return f"SparseMatrix({self.shape[0]}x{self.shape[1]}, nnz={self.nnz}, {self.domain.name})"

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.shape != other.shape or self.nnz != other.nnz:
            return False
        if self.domain.kind != other.domain.kind or self.domain.modulus != other.domain.modulus:
            return False
        if not (np.array_equal(self.rows, other.rows) and np.array_equal(self.cols, other.cols)):
            return False
        if self.values.dtype == object or other.values.dtype == object:
            return all(a == b for a, b in zip(self.values, other.values))
        return bool(np.array_equal(self.values, other.values))

    __hash__ = None

    def to_triplets(self) -> list:
        conv = self.domain.to_python
        return [(int(i), int(j), conv(v)) for i, j, v in zip(self.rows, self.cols, self.values)]

    def to_dict(self) -> dict:
        conv = self.domain.to_python
        return {(int(i), int(j)): conv(v) for i, j, v in zip(self.rows, self.cols, self.values)}

    def to_dense(self) -> np.ndarray:
        x, y = self.shape
        if self.domain.kind == "ring":
            out = np.empty((x, y), dtype=object)
            for a in range(x):
                for b in range(y):
                    out[a, b] = self.domain.ring.zero
        else:
            out = np.zeros((x, y), dtype=self.domain.dtype)
        out[self.rows, self.cols] = self.values
        return out

    def with_domain(self, domain: ScalarDomain) -> "SparseMatrix":
        """Reinterpret the entries in another domain (validated)."""
        vals = domain.asarray(self.values)
        keep = ~domain.zero_mask(vals)
        return SparseMatrix(self.shape, self.rows[keep], self.cols[keep], vals[keep], domain)

    def threshold(self) -> "SparseMatrix":
        """Support as a boolean matrix."""
        return SparseMatrix(self.shape, self.rows, self.cols,
                            np.ones(self.nnz, dtype=np.int64), BOOL)

    # ------------------------------------------------------------ structure
    @cached_property
    def row_ptr(self) -> np.ndarray:
        return np.searchsorted(self.rows, np.arange(self.shape[0] + 1)).astype(np.int64)

    @cached_property
    def row_counts(self) -> np.ndarray:
        return np.bincount(self.rows, minlength=self.shape[0]).astype(np.int64)

    @cached_property
    def col_counts(self) -> np.ndarray:
        return np.bincount(self.cols, minlength=self.shape[1]).astype(np.int64)

    def transpose(self) -> "SparseMatrix":
        x, y = self.shape
        order = canonical_order(self.cols, self.rows, x)
        return SparseMatrix((y, x), self.cols[order], self.rows[order], self.values[order], self.domain)

    @property
    def T(self) -> "SparseMatrix":
        return self.transpose()

    def support(self) -> "SupportSet":
        return SupportSet(self.shape, self.rows, self.cols, trusted=True)

    def select_rows(self, keep_rows: np.ndarray) -> "SparseMatrix":
        """Submatrix on the given (sorted, unique) rows, relabelled 0..len-1."""
        remap = np.full(self.shape[0], -1, dtype=np.int64)
        remap[keep_rows] = np.arange(len(keep_rows))
        new_rows = remap[self.rows]
        m = new_rows >= 0
        return SparseMatrix((len(keep_rows), self.shape[1]), new_rows[m], self.cols[m],
                            self.values[m], self.domain)

    def select_cols(self, keep_cols: np.ndarray) -> "SparseMatrix":
        remap = np.full(self.shape[1], -1, dtype=np.int64)
        remap[keep_cols] = np.arange(len(keep_cols))
        new_cols = remap[self.cols]
        m = new_cols >= 0
        # relabelling is monotone, so canonical order is preserved
        return SparseMatrix((self.shape[0], len(keep_cols)), self.rows[m], new_cols[m],
                            self.values[m], self.domain)

    def embed(self, shape, row_map: np.ndarray | None = None,
              col_map: np.ndarray | None = None) -> "SparseMatrix":
        """Place this matrix into a larger one through monotone index maps."""
        r = self.rows if row_map is None else row_map[self.rows]
        c = self.cols if col_map is None else col_map[self.cols]
        return SparseMatrix(shape, r, c, self.values, self.domain)

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return add(self, other)


def add(*mats: SparseMatrix) -> SparseMatrix:
    """Entrywise sum of same-shape matrices over the first matrix's domain."""
    dom = mats[0].domain
    rows = np.concatenate([m.rows for m in mats])
    cols = np.concatenate([m.cols for m in mats])
    if dom.dtype == object:
        vals = obj_array([v for m in mats for v in m.values])
    else:
        vals = np.concatenate([m.values for m in mats])
    return SparseMatrix.from_arrays(mats[0].shape, rows, cols, vals, dom, validate=False)


def hstack(blocks: list[SparseMatrix]) -> SparseMatrix:
    x = blocks[0].shape[0]
    off = 0
    parts = []
    for b in blocks:
        if b.shape[0] != x:
            raise ValueError("row counts differ")
        parts.append((b.rows, b.cols + off, b.values))
        off += b.shape[1]
    return _stack(parts, (x, off), blocks[0].domain)


def vstack(blocks: list[SparseMatrix]) -> SparseMatrix:
    z = blocks[0].shape[1]
    off = 0
    parts = []
    for b in blocks:
        if b.shape[1] != z:
            raise ValueError("column counts differ")
        parts.append((b.rows + off, b.cols, b.values))
        off += b.shape[0]
    return _stack(parts, (off, z), blocks[0].domain)


def _stack(parts, shape, dom):
    rows = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    if dom.dtype == object:
        vals = obj_array([v for p in parts for v in p[2]])
    else:
        vals = np.concatenate([p[2] for p in parts])
    order = canonical_order(rows, cols, shape[1])
    return SparseMatrix(shape, rows[order], cols[order], vals[order], dom)


def identity(n: int, domain: ScalarDomain, scale=None) -> SparseMatrix:
    one = (domain.ring.one if domain.kind == "ring" else 1) if scale is None else scale
    idx = np.arange(n, dtype=np.int64)
    return SparseMatrix((n, n), idx, idx.copy(), obj_array([one] * n) if domain.dtype == object
                        else np.full(n, one, dtype=np.int64), domain)


class DenseMatrix:
    """A fully materialised matrix over a domain."""

    def __init__(self, data: np.ndarray, domain: ScalarDomain):
        if data.ndim != 2:
            raise ValueError("dense matrix must be 2-D")
        self.data = data
        self.domain = domain

    @property
    def shape(self):
        return self.data.shape

    @classmethod
    def from_sparse(cls, m: SparseMatrix) -> "DenseMatrix":
        return cls(m.to_dense(), m.domain)

    def to_sparse(self) -> SparseMatrix:
        return SparseMatrix.from_dense(self.data, self.domain)

    def __repr__(self):
        return f"DenseMatrix({self.shape[0]}x{self.shape[1]}, {self.domain.name})"


class SupportSet:
    """A set of coordinates in an x-by-z grid, sorted by (row, col)."""

    def __init__(self, shape, rows, cols, trusted: bool = False):
        self.shape = (int(shape[0]), int(shape[1]))
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        if not trusted:
            if rows.size and (rows.min() < 0 or rows.max() >= self.shape[0]
                              or cols.min() < 0 or cols.max() >= self.shape[1]):
                raise IndexError("support index outside the grid")
            order = canonical_order(rows, cols, self.shape[1])
            rows, cols = rows[order], cols[order]
            if rows.size:
                new = np.ones(len(rows), dtype=bool)
                new[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
                rows, cols = rows[new], cols[new]
        self.rows = rows
        self.cols = cols

    @classmethod
    def from_pairs(cls, pairs, shape) -> "SupportSet":
        pairs = list(pairs)
        return cls(shape, [p[0] for p in pairs], [p[1] for p in pairs])

    def __len__(self):
        return int(self.rows.size)

    def __repr__(self):
        return f"SupportSet({self.shape[0]}x{self.shape[1]}, size={len(self)})"

    def pairs(self) -> set:
        return set(zip(self.rows.tolist(), self.cols.tolist()))

    def degrees(self) -> np.ndarray:
        return np.bincount(self.rows, minlength=self.shape[0]).astype(np.int64)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if len(self) else 0

    def contains(self, other: "SupportSet") -> bool:
        """True when ``other`` is a subset of this set."""
        if len(other) == 0:
            return True
        z = max(self.shape[1], other.shape[1], 1)
        mine = self.rows * z + self.cols
        theirs = other.rows * z + other.cols
        pos = np.searchsorted(mine, theirs)
        pos = np.minimum(pos, max(len(mine) - 1, 0))
        return bool(len(mine)) and bool(np.all(mine[pos] == theirs))

    def select_rows(self, keep_rows: np.ndarray) -> "SupportSet":
        remap = np.full(self.shape[0], -1, dtype=np.int64)
        remap[keep_rows] = np.arange(len(keep_rows))
        r = remap[self.rows]
        m = r >= 0
        return SupportSet((len(keep_rows), self.shape[1]), r[m], self.cols[m], trusted=True)
