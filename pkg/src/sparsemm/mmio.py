"""Matrix Market coordinate files (integer or pattern, general symmetry).

Indices are 1-based on disk.  Pattern files read as boolean matrices.
Entries of a Z/k domain are reduced on read.
"""

from __future__ import annotations

import io
import os

import numpy as np

from .domains import BIGINT, BOOL, INT, DomainError, ScalarDomain
from .matrix import SparseMatrix


class MatrixMarketError(ValueError):
    """Malformed Matrix Market input."""


def _open(src, mode):
    if isinstance(src, (str, os.PathLike)):
        return open(src, mode), True
    return src, False


def read_matrix_market(src, domain: ScalarDomain | None = None) -> SparseMatrix:
    fh, owned = _open(src, "r")
    try:
        text = fh.read()
    finally:
        if owned:
            fh.close()
    lines = text.splitlines()
    if not lines:
        raise MatrixMarketError("empty file")
    head = lines[0].split()
    if len(head) != 5 or head[0].lower() != "%%matrixmarket":
        raise MatrixMarketError("missing %%MatrixMarket header")
    obj, fmt, field, sym = (h.lower() for h in head[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError(f"unsupported layout {obj} {fmt}")
    if field not in ("integer", "pattern"):
        raise MatrixMarketError(f"unsupported field {field!r}")
    if sym != "general":
        raise MatrixMarketError(f"unsupported symmetry {sym!r}")
    body = [ln for ln in lines[1:] if ln.strip() and not ln.lstrip().startswith("%")]
    if not body:
        raise MatrixMarketError("missing size line")
    try:
        nrows, ncols, nnz = (int(t) for t in body[0].split())
    except ValueError:
        raise MatrixMarketError(f"bad size line {body[0]!r}") from None
    if nrows < 0 or ncols < 0 or nnz < 0:
        raise MatrixMarketError("negative size")
    entries = body[1:]
    if len(entries) != nnz:
        raise MatrixMarketError(f"expected {nnz} entries, found {len(entries)}")
    want = 2 if field == "pattern" else 3
    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = []
    for n, ln in enumerate(entries):
        parts = ln.split()
        if len(parts) != want:
            raise MatrixMarketError(f"entry line {n + 1}: expected {want} fields")
        try:
            rows[n] = int(parts[0]) - 1
            cols[n] = int(parts[1]) - 1
            vals.append(1 if field == "pattern" else int(parts[2]))
        except ValueError:
            raise MatrixMarketError(f"entry line {n + 1}: not an integer") from None
    if nnz and (rows.min() < 0 or cols.min() < 0 or rows.max() >= nrows or cols.max() >= ncols):
        raise MatrixMarketError("entry index outside declared shape")
    if domain is None:
        domain = BOOL if field == "pattern" else (
            INT if all(-(1 << 63) <= v < (1 << 63) for v in vals) else BIGINT)
    if domain.kind == "zmod":
        vals = [v % domain.modulus for v in vals]
    try:
        return SparseMatrix.from_arrays((nrows, ncols), rows, cols, vals, domain)
    except (DomainError, ArithmeticError) as exc:
        raise MatrixMarketError(str(exc)) from None


def write_matrix_market(M: SparseMatrix, dst, pattern: bool | None = None,
                        comment: str | None = None) -> None:
    if M.domain.kind == "ring":
        raise ValueError("abstract ring entries cannot be written as integers")
    if pattern is None:
        pattern = M.domain.kind == "bool"
    buf = io.StringIO()
    buf.write(f"%%MatrixMarket matrix coordinate {'pattern' if pattern else 'integer'} general\n")
    if comment:
        for ln in comment.splitlines():
            buf.write(f"% {ln}\n")
    buf.write(f"{M.shape[0]} {M.shape[1]} {M.nnz}\n")
    r = (M.rows + 1).tolist()
    c = (M.cols + 1).tolist()
    if pattern:
        buf.writelines(f"{a} {b}\n" for a, b in zip(r, c))
    else:
        buf.writelines(f"{a} {b} {int(v)}\n" for a, b, v in zip(r, c, M.values))
    fh, owned = _open(dst, "w")
    try:
        fh.write(buf.getvalue())
    finally:
        if owned:
            fh.close()


def write_dense_matrix_market(data: np.ndarray, dst) -> None:
    """Dense matrices use the same coordinate format with every entry listed."""
    x, y = data.shape
    buf = io.StringIO()
    buf.write("%%MatrixMarket matrix coordinate integer general\n")
    buf.write(f"{x} {y} {x * y}\n")
    for i in range(x):
        for j in range(y):
            buf.write(f"{i + 1} {j + 1} {int(data[i, j])}\n")
    fh, owned = _open(dst, "w")
    try:
        fh.write(buf.getvalue())
    finally:
        if owned:
            fh.close()


def read_dense_matrix_market(src, domain: ScalarDomain | None = None) -> np.ndarray:
    M = read_matrix_market(src, domain)
    return M.to_dense()
