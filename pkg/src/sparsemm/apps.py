"""Reductions built on the sparse product.

* all-edges triangle and per-edge triangle counts on tripartite graphs
* bit splitting: nonnegative products from 0/1 products
* shifting: signed integer products from nonnegative ones
* error correction of an almost-correct product
* transitive closure by repeated squaring
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .domains import BIGINT, BOOL, INT, INT64_MAX, NONNEG, ScalarDomain, obj_array
from .graphs import Digraph, TripartiteGraph
from .input_sparse import multiply_sparse
from .matrix import SparseMatrix, add, hstack, identity, vstack

Multiply = Callable[[SparseMatrix, SparseMatrix], SparseMatrix]


# ---------------------------------------------------------------- triangles


def _edge_set(e: np.ndarray) -> set:
    return set(map(tuple, e.tolist()))


def ae_triangle_via_mm(G: TripartiteGraph, **opts) -> set:
    """X-Z edges that lie in at least one triangle."""
    P = multiply_sparse(G.matrix("xy"), G.matrix("yz"), **opts)
    return _edge_set(np.stack([P.rows, P.cols], axis=1)) & _edge_set(G.exz)


def count_triangles_via_mm(G: TripartiteGraph, **opts) -> dict:
    """Triangles through each X-Z edge (every edge listed, zeros included)."""
    A = G.matrix("xy").with_domain(NONNEG)
    B = G.matrix("yz").with_domain(NONNEG)
    paths = multiply_sparse(A, B, **opts).to_dict()
    return {e: paths.get(e, 0) for e in map(tuple, G.exz.tolist())}


def count_triangles_brute(G: TripartiteGraph) -> dict:
    ny_of_x: dict = {}
    for u, v in G.exy.tolist():
        ny_of_x.setdefault(u, set()).add(v)
    ny_of_z: dict = {}
    for v, w in G.eyz.tolist():
        ny_of_z.setdefault(w, set()).add(v)
    out = {}
    for u, w in G.exz.tolist():
        out[(u, w)] = len(ny_of_x.get(u, set()) & ny_of_z.get(w, set()))
    return out


def ae_triangle_brute(G: TripartiteGraph) -> set:
    return {e for e, c in count_triangles_brute(G).items() if c > 0}


# ---------------------------------------------------------------- bit split


def bit_layers(A: SparseMatrix) -> list[SparseMatrix]:
    """0/1 matrices A_l with A = sum_l 2**l A_l."""
    if A.domain.kind not in ("nonneg", "bool", "bigint"):
        raise ValueError("bit splitting needs nonnegative entries")
    vals = [int(v) for v in A.values]
    if any(v < 0 for v in vals):
        raise ValueError("bit splitting needs nonnegative entries")
    top = max((v.bit_length() for v in vals), default=0)
    layers = []
    for ell in range(max(top, 1)):
        bits = np.fromiter(((v >> ell) & 1 for v in vals), dtype=np.int64, count=len(vals))
        m = bits == 1
        layers.append(SparseMatrix(A.shape, A.rows[m], A.cols[m], bits[m], NONNEG))
    return layers


def bit_split_multiply(A: SparseMatrix, B: SparseMatrix, inner: Multiply | None = None,
                       **opts) -> SparseMatrix:
    """AB for nonnegative A, B using only products of 0/1 matrices."""
    inner = inner or (lambda P, Q: multiply_sparse(P, Q, **opts))
    LA, LB = bit_layers(A), bit_layers(B)
    x, z = A.shape[0], B.shape[1]
    rows, cols, vals = [], [], []
    for l1, Al in enumerate(LA):
        if Al.nnz == 0:
            continue
        for l2, Bl in enumerate(LB):
            if Bl.nnz == 0:
                continue
            P = inner(Al, Bl)
            rows.append(P.rows)
            cols.append(P.cols)
            vals.append(P.values.astype(object) * (1 << (l1 + l2)))
    if not rows:
        return SparseMatrix.zeros((x, z), NONNEG)
    big = SparseMatrix.from_arrays((x, z), np.concatenate(rows), np.concatenate(cols),
                                   np.concatenate(vals), BIGINT, validate=False)
    return _narrow(big, NONNEG)


def _narrow(M: SparseMatrix, dom: ScalarDomain) -> SparseMatrix:
    """Back to int64 storage when every entry fits, otherwise keep Python ints."""
    if M.nnz == 0 or max(abs(int(v)) for v in M.values) <= INT64_MAX:
        return SparseMatrix(M.shape, M.rows, M.cols, M.values.astype(np.int64), dom)
    return M


# ---------------------------------------------------------------- shift


def shift_multiply(A: SparseMatrix, B: SparseMatrix, inner: Multiply | None = None,
                   **opts) -> SparseMatrix:
    """Signed AB from four nonnegative products.

    With D the largest absolute entry, A0 = A + D and A1 = D on supp(A)
    (likewise B0, B1), and AB = A0 B0 - A0 B1 - A1 B0 + A1 B1.
    """
    if A.domain.kind not in ("int", "bigint", "nonneg") or B.domain.kind != A.domain.kind:
        raise ValueError("shift_multiply needs integer matrices of one domain")
    x, z = A.shape[0], B.shape[1]
    D = max([abs(int(v)) for v in A.values] + [abs(int(v)) for v in B.values] + [0])
    inner_dim = A.shape[1]
    wide = (2 * D) * (2 * D) * max(inner_dim, 1) > INT64_MAX
    if inner is None:
        if wide:
            inner = lambda P, Q: multiply_sparse(P, Q, route="int", **opts)  # noqa: E731
        else:
            inner = lambda P, Q: multiply_sparse(P, Q, **opts)  # noqa: E731
    dom = BIGINT if wide else NONNEG

    def parts(M):
        v = M.values.astype(object)
        m0 = v + D
        m1 = obj_array([D] * M.nnz)
        if not wide:
            m0, m1 = m0.astype(np.int64), m1.astype(np.int64)
        return (SparseMatrix(M.shape, M.rows, M.cols, m0, dom),
                SparseMatrix(M.shape, M.rows, M.cols, m1, dom))

    A0, A1 = parts(A)
    B0, B1 = parts(B)
    terms = [(inner(A0, B0), 1), (inner(A0, B1), -1), (inner(A1, B0), -1), (inner(A1, B1), 1)]
    rows = np.concatenate([t.rows for t, _ in terms])
    cols = np.concatenate([t.cols for t, _ in terms])
    vals = np.concatenate([t.values.astype(object) * s for t, s in terms])
    big = SparseMatrix.from_arrays((x, z), rows, cols, vals, BIGINT, validate=False)
    out_dom = A.domain if A.domain.kind != "nonneg" else INT
    if out_dom.kind == "bigint":
        return big
    return _narrow(big, out_dom)


# ---------------------------------------------------------------- correction


def correct_product(A: SparseMatrix, B: SparseMatrix, C_tilde: SparseMatrix,
                    return_error: bool = False, **opts):
    """AB from a product guess that is wrong in few entries.

    E = (A | -I)(B ; C_tilde) = AB - C_tilde has one nonzero per wrong entry,
    so the sparse product finds it in time depending on the number of errors.
    """
    x, y = A.shape
    z = B.shape[1]
    if B.shape[0] != y or C_tilde.shape != (x, z):
        raise ValueError("dimension mismatch between A, B and C_tilde")
    dom = A.domain
    if B.domain != dom or C_tilde.domain != dom:
        raise ValueError("A, B and C_tilde must share a domain")
    if not dom.has_negation:
        raise ValueError(f"error correction needs negation; {dom.name} has none")
    one = dom.ring.one if dom.kind == "ring" else 1
    if one is None:
        raise ValueError("ring needs a unit element")
    minus_one = dom.neg(obj_array([one]) if dom.dtype == object else np.array([one]))[0]
    negI = identity(x, dom, scale=minus_one)
    Ap = hstack([A, negI])
    Bp = vstack([B, C_tilde])
    E = multiply_sparse(Ap, Bp, **opts)
    out = add(C_tilde, E)
    return (out, E) if return_error else out


# ---------------------------------------------------------------- closure


def transitive_closure(G: Digraph, self_loops: str = "input", report_rounds: list | None = None,
                       **opts) -> Digraph:
    """Reachability by squaring (adjacency + I) until it stops changing.

    ``self_loops='input'`` keeps (v, v) only when G has that arc;
    ``'cycles'`` reports (v, v) exactly when v lies on a directed cycle.
    """
    n = G.n
    if n == 0:
        return Digraph(0, np.zeros((0, 2), np.int64))
    A = G.adjacency()
    R = add(A, identity(n, BOOL))
    rounds = 0
    limit = math.ceil(math.log2(max(n, 2))) + 1
    while True:
        R2 = multiply_sparse(R, R, **opts)
        rounds += 1
        if R2 == R:
            break
        R = R2
        if rounds > limit:
            raise RuntimeError("closure did not reach a fixpoint in log2(n)+1 rounds")
    if report_rounds is not None:
        report_rounds.append(rounds)
    if self_loops == "cycles":
        T = multiply_sparse(A, R, **opts)
        return Digraph(n, np.stack([T.rows, T.cols], axis=1))
    if self_loops != "input":
        raise ValueError("self_loops must be 'input' or 'cycles'")
    off = R.rows != R.cols
    arcs = np.stack([R.rows[off], R.cols[off]], axis=1)
    loops = G.arcs[G.arcs[:, 0] == G.arcs[:, 1]] if len(G.arcs) else np.zeros((0, 2), np.int64)
    return Digraph(n, np.concatenate([arcs, loops]))


def closure_floyd_warshall(G: Digraph, self_loops: str = "input") -> Digraph:
    """Cubic reference: reach[i, j] via paths of length >= 1."""
    n = G.n
    reach = np.zeros((n, n), dtype=bool)
    if len(G.arcs):
        reach[G.arcs[:, 0], G.arcs[:, 1]] = True
    for k in range(n):
        reach |= reach[:, k, None] & reach[None, k, :]
    if self_loops == "input":
        diag = np.zeros(n, dtype=bool)
        if len(G.arcs):
            loop = G.arcs[:, 0] == G.arcs[:, 1]
            diag[G.arcs[loop, 0]] = True
        reach[np.arange(n), np.arange(n)] = diag
    return Digraph(n, np.argwhere(reach))
