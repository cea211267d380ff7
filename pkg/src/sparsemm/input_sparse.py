"""Heavy/light products and the top-level entry point.

Columns of A with at most Delta nonzeros are light.  The light part is
enumerated directly (work at most nnz(B1) * Delta); the heavy part has at
most nnz(A)/Delta columns, so it is small enough to hand to a dense
multiplication.  ``multiply_sparse`` wires this in as the backend of the
densification routes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .densify import (
    Backend,
    DensifyConfig,
    densify_integer,
    densify_nonnegative,
    densify_ring,
)
from .domains import NONNEG, ScalarDomain
from .kernels import dense_matmul, expansion_work, ring_zeros, sparse_product, strassen_matmul
from .matrix import SparseMatrix, add
from .report import Report

log = logging.getLogger(__name__)

# entries allowed in the dense heavy product (x*y2 + y2*z + x*z)
DENSE_BUDGET = 1 << 26


@dataclass
class HeavyLightSplit:
    A1: SparseMatrix
    B1: SparseMatrix
    A2: SparseMatrix
    B2: SparseMatrix
    light: np.ndarray
    heavy: np.ndarray


def split_heavy_light(A: SparseMatrix, B: SparseMatrix, delta: int) -> HeavyLightSplit:
    """Partition the nonempty columns of A (and rows of B) by column count."""
    if delta < 1:
        raise ValueError("delta must be at least 1")
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    cnt = A.col_counts
    light = np.flatnonzero((cnt >= 1) & (cnt <= delta))
    heavy = np.flatnonzero(cnt > delta)
    return HeavyLightSplit(A.select_cols(light), B.select_rows(light),
                           A.select_cols(heavy), B.select_rows(heavy), light, heavy)


def multiply_light(A1: SparseMatrix, B1: SparseMatrix, delta: int,
                   report: Report | None = None) -> SparseMatrix:
    """Enumerate A1 B1 when every column of A1 has at most ``delta`` entries."""
    if A1.nnz and int(A1.col_counts.max()) > delta:
        raise ValueError("a column of A1 exceeds the light threshold")
    if report is not None:
        report.light_work += expansion_work(A1, B1)
        report.light_calls += 1
    return sparse_product(A1, B1)


def _dense_product(A2: SparseMatrix, B2: SparseMatrix, backend: str) -> SparseMatrix:
    dom = A2.domain
    X, Y = A2.to_dense(), B2.to_dense()
    if backend == "strassen" and (dom.kind != "ring" or dom.ring.neg is not None):
        calc = dom
        if dom.kind == "nonneg":
            from .domains import INT

            calc = INT
        C = strassen_matmul(X, Y, calc)
    else:
        C = dense_matmul(X, Y, dom)
    return SparseMatrix.from_dense(C, dom)


def multiply_input_sparse(A: SparseMatrix, B: SparseMatrix, delta: int,
                          dense_backend: str = "naive", report: Report | None = None,
                          dense_budget: int = DENSE_BUDGET) -> SparseMatrix:
    """A B via the heavy/light split; the result is independent of ``delta``."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    if A.domain != B.domain:
        raise ValueError("domains differ")
    x, y = A.shape
    z = B.shape[1]
    if A.nnz == 0 or B.nnz == 0:
        return SparseMatrix.zeros((x, z), A.domain)
    # drop empty rows of A and empty columns of B
    rows = np.flatnonzero(A.row_counts)
    cols = np.flatnonzero(B.col_counts)
    if len(rows) < x or len(cols) < z:
        sub = multiply_input_sparse(A.select_rows(rows), B.select_cols(cols), delta,
                                    dense_backend, report, dense_budget)
        return sub.embed((x, z), rows, cols)
    if x > z and A.domain.commutative:
        if report is not None:
            report.transposed += 1
        return multiply_input_sparse(B.transpose(), A.transpose(), delta, dense_backend,
                                     report, dense_budget).transpose()
    sp = split_heavy_light(A, B, delta)
    parts = []
    if sp.A1.nnz:
        parts.append(multiply_light(sp.A1, sp.B1, delta, report))
    if sp.A2.nnz:
        y2 = sp.A2.shape[1]
        if x * y2 + y2 * z + x * z <= dense_budget:
            if report is not None:
                report.heavy_calls += 1
                report.heavy_shapes.append((x, y2, z))
            parts.append(_dense_product(sp.A2, sp.B2, dense_backend))
        else:
            log.warning("heavy part %dx%dx%d exceeds the dense budget; enumerating", x, y2, z)
            if report is not None:
                report.fallbacks += 1
            parts.append(sparse_product(sp.A2, sp.B2))
    if not parts:
        return SparseMatrix.zeros((x, z), A.domain)
    return parts[0] if len(parts) == 1 else add(*parts)


# ---------------------------------------------------------------- top level

MU = 0.5286


def default_delta(m_in: int, r: float = 1.0) -> int:
    """ceil(m_in ** (sigma - 1)) with sigma the algebraic exponent bound at r."""
    from .exponent import sigma_algebraic

    s = sigma_algebraic(r)
    return max(1, math.ceil(max(2, m_in) ** (s - 1)))


def _route_for(dom: ScalarDomain) -> str:
    if dom.kind in ("bool", "nonneg"):
        return "nonneg"
    if dom.kind in ("int", "bigint"):
        return "int"
    return "ring"


def multiply_sparse(A: SparseMatrix, B: SparseMatrix, *, route: str = "auto",
                    delta: int | str = "auto", hashing: str = "det", seed: int | None = 0,
                    backend: str = "naive", r: float = 1.0, L: int | None = None,
                    w: int | None = None, leaf_rows: int | None = None,
                    report: Report | None = None) -> SparseMatrix:
    """Exact sparse product with output-sensitive cost.

    ``route`` picks the densification: ``nonneg`` (deterministic with the
    default ``hashing='det'``), ``int`` (Las Vegas) or ``ring`` (Monte Carlo);
    ``auto`` chooses from the domain.  ``delta`` is the heavy/light threshold
    used inside every backend call.
    """
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    if A.domain != B.domain:
        raise ValueError(f"domains differ: {A.domain.name} vs {B.domain.name}")
    dom = A.domain
    x, z = A.shape[0], B.shape[1]
    if route == "auto":
        route = _route_for(dom)
    m_in = A.nnz + B.nnz
    if delta == "auto":
        delta = default_delta(m_in, r)
    elif isinstance(delta, str):
        raise ValueError(f"bad delta {delta!r}")
    delta = int(delta)
    config = DensifyConfig(hashing=hashing, seed=seed, L=L, w=w, leaf_rows=leaf_rows)
    if A.nnz == 0 or B.nnz == 0:
        return SparseMatrix.zeros((x, z), dom)
    rows = np.flatnonzero(A.row_counts)
    cols = np.flatnonzero(B.col_counts)
    At, Bt = A.select_rows(rows), B.select_cols(cols)
    boolean = dom.kind == "bool"
    if boolean:
        At = SparseMatrix(At.shape, At.rows, At.cols, At.values, NONNEG)
        Bt = SparseMatrix(Bt.shape, Bt.rows, Bt.cols, Bt.values, NONNEG)
    be = Backend(lambda P, Q: multiply_input_sparse(P, Q, delta, backend, report), report,
                 "input-sparse")
    if route == "nonneg":
        if At.domain.kind != "nonneg":
            raise ValueError(f"nonneg route needs nonnegative entries, got {dom.name}")
        C = densify_nonnegative(At, Bt, be, config, report)
    elif route == "int":
        if At.domain.kind not in ("int", "bigint", "nonneg"):
            raise ValueError(f"int route needs integer entries, got {dom.name}")
        C = densify_integer(At, Bt, be, config, report)
    elif route == "ring":
        C = densify_ring(At, Bt, be, config, report)
    else:
        raise ValueError(f"unknown route {route!r}")
    if boolean:
        C = C.threshold()
    return C.embed((x, z), rows, cols)
