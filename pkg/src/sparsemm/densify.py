"""Output densification.

``recover`` turns a superset S of supp(AB) into the product itself using
only backend products whose output is at most 4|S| entries: rows are grouped
by their degree in S, and for each group the columns of B are hashed into a
small number of buckets.  Pairs isolated by a hash can be read off the
compressed product.

The three ``densify_*`` routes produce S by recursing on a matrix with half
(or 1/w) as many rows:

* nonnegative: add rows in pairs; no cancellation is possible, so
  supp(C') lifted back to both rows covers supp(C) and |S| <= 2 nnz(C);
* integer: add row 2i to r times row 2i+1 for a random r, which cancels with
  probability at most 1/r over the choice of r;
* ring: fold w rows at a time through L random subsets; a nonzero entry of
  the product survives in at least one of them w.h.p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domains import BIGINT, NONNEG, ScalarDomain, obj_array
from .isolation import build_deterministic_family, isolated_mask, sample_random_family
from .kernels import sparse_product
from .matrix import SparseMatrix, SupportSet
from .report import BackendCall, RecoverCall, RecursionStep, Report


class IsolationFailure(RuntimeError):
    """A random hash family left some pair of S unisolated."""


@dataclass
class DensifyConfig:
    hashing: str = "det"          # "det" or "rand"
    seed: int | None = 0
    repetitions: int | None = None  # random hashes per level; default 10 ceil(log2 m_in)
    L: int | None = None           # ring repetitions; default 10 ceil(log2 m_in)
    w: int | None = None           # ring fan-in; default 2 ** ceil(sqrt(log2 m_in))
    leaf_rows: int | None = None   # ring nodes with at most this many rows are multiplied
                                   # exactly; default w, 1 gives the full recursion

    def __post_init__(self):
        if self.hashing not in ("det", "rand"):
            raise ValueError("hashing must be 'det' or 'rand'")
        if self.L is not None and self.L < 1:
            raise ValueError("L must be at least 1")
        if self.w is not None and self.w < 2:
            raise ValueError("w must be at least 2")
        if self.leaf_rows is not None and self.leaf_rows < 1:
            raise ValueError("leaf_rows must be at least 1")


def log_factor(m_in: int) -> int:
    return max(1, math.ceil(math.log2(max(2, m_in))))


def default_L(m_in: int) -> int:
    return 10 * log_factor(m_in)


def default_w(m_in: int) -> int:
    return max(2, 2 ** math.ceil(math.sqrt(math.log2(max(2, m_in)))))


class Backend:
    """Wraps a sparse product routine and records the shape of every call."""

    def __init__(self, fn: Callable[[SparseMatrix, SparseMatrix], SparseMatrix],
                 report: Report | None = None, name: str = "backend"):
        self.fn = fn
        self.report = report
        self.name = name

    def __call__(self, A: SparseMatrix, B: SparseMatrix) -> SparseMatrix:
        if self.report is not None:
            self.report.backend_calls.append(
                BackendCall(A.shape[0], A.shape[1], B.shape[1], A.nnz, B.nnz))
        return self.fn(A, B)


def _enumeration_backend(report=None) -> Backend:
    return Backend(sparse_product, report, "enumerate")


def compress(B: SparseMatrix, h: np.ndarray, buckets: int) -> SparseMatrix:
    """B'[k, b] = sum of B[k, j] over columns j with h(j) = b."""
    return SparseMatrix.from_arrays((B.shape[0], buckets), B.rows, h[B.cols], B.values,
                                    B.domain, validate=False)


def _lookup(C: SparseMatrix, rows: np.ndarray, cols: np.ndarray, zero) -> np.ndarray:
    z = max(C.shape[1], 1)
    keys = C.rows * z + C.cols
    want = rows * z + cols
    pos = np.searchsorted(keys, want)
    pos_c = np.minimum(pos, max(len(keys) - 1, 0))
    hit = (pos < len(keys)) & (keys[pos_c] == want) if len(keys) else np.zeros(len(want), bool)
    if C.values.dtype == object:
        out = obj_array([zero] * len(want))
        idx = np.flatnonzero(hit)
        src = C.values[pos_c[idx]]
        for a, v in zip(idx, src):
            out[a] = v
        return out
    out = np.zeros(len(want), dtype=C.values.dtype)
    out[hit] = C.values[pos_c[hit]]
    return out


def _rng(config: DensifyConfig, rng):
    if rng is not None:
        return rng
    return np.random.default_rng(config.seed)


def recover(A: SparseMatrix, B: SparseMatrix, S: SupportSet, backend: Backend | None = None,
            config: DensifyConfig | None = None, report: Report | None = None,
            rng: np.random.Generator | None = None) -> SparseMatrix:
    """Product AB restricted to S (exact on S; S must cover supp(AB))."""
    config = config or DensifyConfig()
    backend = backend or _enumeration_backend(report)
    x, y = A.shape
    z = B.shape[1]
    if B.shape[0] != y:
        raise ValueError(f"inner dimensions differ: {A.shape} x {B.shape}")
    if S.shape != (x, z):
        raise ValueError(f"support grid {S.shape} does not match product shape {(x, z)}")
    dom = A.domain
    if len(S) == 0 or A.nnz == 0 or B.nnz == 0:
        return SparseMatrix.zeros((x, z), dom)
    rng = _rng(config, rng)
    m_in = A.nnz + B.nnz
    deg = S.degrees()
    level = np.full(x, -1, dtype=np.int64)
    nz = deg > 0
    level[nz] = np.floor(np.log2(deg[nz])).astype(np.int64)
    # guard against floating error at exact powers of two
    level[nz] += (deg[nz] >= (2 ** (level[nz] + 1)))
    level[nz] -= (deg[nz] < (2 ** level[nz]))
    out_rows, out_cols, out_vals = [], [], []
    n_funcs = 0
    max_cap = 0
    n_levels = 0
    first_call = len(report.backend_calls) if report is not None else 0
    for ell in np.unique(level[nz]).tolist():
        rows_l = np.flatnonzero(level == ell)
        A_l = A.select_rows(rows_l)
        S_l = S.select_rows(rows_l)
        zl = 2 ** (ell + 2)
        n_levels += 1
        if A_l.nnz == 0:
            continue
        if config.hashing == "det":
            fam = build_deterministic_family(S_l, z, 2 ** (ell + 1))
        else:
            count = config.repetitions or 10 * log_factor(m_in)
            fam = sample_random_family(z, zl, count, rng)
        done = np.zeros(len(S_l), dtype=bool)
        if dom.dtype == object:
            vals = obj_array([dom.zero] * len(S_l))
        else:
            vals = np.zeros(len(S_l), dtype=dom.dtype)
        for h in fam:
            if done.all():
                break
            Bc = compress(B, h, zl)
            Cc = backend(A_l, Bc)
            max_cap = max(max_cap, A_l.shape[0] * zl)
            n_funcs += 1
            iso = isolated_mask(S_l, h) & ~done
            if iso.any():
                got = _lookup(Cc, S_l.rows[iso], h[S_l.cols[iso]], dom.zero)
                vals[iso] = got
                done |= iso
        if not done.all():
            raise IsolationFailure(f"{int((~done).sum())} pairs left unisolated at level {ell}")
        out_rows.append(rows_l[S_l.rows])
        out_cols.append(S_l.cols)
        out_vals.append(vals)
    if report is not None:
        caps = [c.cap for c in report.backend_calls[first_call:]]
        report.recover_calls.append(RecoverCall(x, z, len(S), n_levels, n_funcs, max_cap,
                                                config.hashing, caps))
    if not out_rows:
        return SparseMatrix.zeros((x, z), dom)
    rows = np.concatenate(out_rows)
    cols = np.concatenate(out_cols)
    vals = np.concatenate(out_vals) if len(out_vals) > 1 else out_vals[0]
    if dom.dtype == object and vals.dtype != object:
        vals = vals.astype(object)
    keep = ~dom.zero_mask(vals)
    rows, cols, vals = rows[keep], cols[keep], vals[keep]
    order = np.lexsort((cols, rows))
    return SparseMatrix((x, z), rows[order], cols[order], vals[order], dom)


def _lift_pairs(C: SparseMatrix, fan: int, x: int) -> SupportSet:
    """{(fan*i + t, j) : (i, j) in supp(C), 0 <= t < fan, fan*i + t < x}."""
    r = (C.rows[:, None] * fan + np.arange(fan)[None, :]).reshape(-1)
    c = np.repeat(C.cols, fan)
    m = r < x
    return SupportSet((x, C.shape[1]), r[m], c[m])


# ---------------------------------------------------------------- nonnegative


def densify_nonnegative(A: SparseMatrix, B: SparseMatrix, backend: Backend | None = None,
                        config: DensifyConfig | None = None, report: Report | None = None,
                        rng=None) -> SparseMatrix:
    """Exact AB over the nonnegative integers (deterministic with det hashing)."""
    config = config or DensifyConfig()
    if A.domain.kind not in ("nonneg", "bool") or B.domain.kind != A.domain.kind:
        raise ValueError("densify_nonnegative needs nonnegative (or boolean) inputs")
    boolean = A.domain.kind == "bool"
    if boolean:
        A = SparseMatrix(A.shape, A.rows, A.cols, A.values, NONNEG)
        B = SparseMatrix(B.shape, B.rows, B.cols, B.values, NONNEG)
    rng = _rng(config, rng)
    C = _nonneg(A, B, backend, config, report, rng, 0)
    return C.threshold() if boolean else C


def _nonneg(A, B, backend, config, report, rng, depth):
    x = A.shape[0]
    if x <= 1 or A.nnz == 0:
        return sparse_product(A, B)
    half = (x + 1) // 2
    Af = SparseMatrix.from_arrays((half, A.shape[1]), A.rows // 2, A.cols, A.values,
                                  A.domain, validate=False)
    Cf = _nonneg(Af, B, backend, config, report, rng, depth + 1)
    S = _lift_pairs(Cf, 2, x)
    if report is not None:
        report.recursion.append(RecursionStep("nonneg", depth, x, len(S), Cf.nnz))
    return recover(A, B, S, backend, config, report, rng)


# ---------------------------------------------------------------- integer


def _random_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [1, bound]."""
    nbytes = (bound.bit_length() + 7) // 8 + 8
    return 1 + int.from_bytes(rng.bytes(nbytes), "little") % bound


def densify_integer(A: SparseMatrix, B: SparseMatrix, backend: Backend | None = None,
                    config: DensifyConfig | None = None, report: Report | None = None,
                    rng=None) -> SparseMatrix:
    """AB over the integers; correct with probability >= 1 - m_in**-9.

    Folded matrices carry Python ints (their entries grow by a factor
    m_in**10 per level); the final recovery runs in the input's own domain.
    """
    config = config or DensifyConfig()
    if A.domain.kind not in ("int", "bigint", "nonneg") or B.domain != A.domain:
        raise ValueError("densify_integer needs integer inputs of one domain")
    rng = _rng(config, rng)
    R = max(2, A.nnz + B.nnz) ** 10
    return _integer(A, B, R, backend, config, report, rng, 0, None)


def _integer(A, B, R, backend, config, report, rng, depth, Bbig):
    x = A.shape[0]
    if x <= 1 or A.nnz == 0:
        return sparse_product(A, B)
    if Bbig is None:
        Bbig = B if B.domain.kind == "bigint" else SparseMatrix(
            B.shape, B.rows, B.cols, B.values.astype(object), BIGINT)
    r = _random_below(rng, R)
    half = (x + 1) // 2
    vals = A.values.astype(object)
    odd = A.rows % 2 == 1
    vals[odd] = vals[odd] * r
    Af = SparseMatrix.from_arrays((half, A.shape[1]), A.rows // 2, A.cols, vals, BIGINT,
                                  validate=False)
    Cf = _integer(Af, Bbig, R, backend, config, report, rng, depth + 1, Bbig)
    S = _lift_pairs(Cf, 2, x)
    if report is not None:
        report.recursion.append(RecursionStep("int", depth, x, len(S), Cf.nnz))
    return recover(A, B, S, backend, config, report, rng)


# ---------------------------------------------------------------- ring
#
# The recursion tree is complete: every node at depth d has the same number
# of rows x_d = ceil(x_{d-1} / w).  Node k at depth d draws its L subsets
# from a generator keyed by (seed, d, k), so the level-synchronous engine
# below and the plain recursive reference make identical choices.  The
# level engine stacks all nodes of a depth vertically; products of stacked
# matrices are the stacked products, so one recover per depth serves all.


class _SubsetDraws:
    """Subset indicators, one (L, w) block per node; depth d has L**d nodes."""

    def __init__(self, seed, L: int, w: int):
        self.seed = 0 if seed is None else int(seed)
        self.L = L
        self.w = w
        self._cache: dict = {}

    def level(self, depth: int) -> np.ndarray:
        if depth not in self._cache:
            g = np.random.default_rng([self.seed, 0x51AB, depth])
            n = self.L ** depth
            self._cache[depth] = g.integers(0, 2, size=(n, self.L, self.w), dtype=np.int8) == 1
        return self._cache[depth]

    def bits(self, depth: int, node: int) -> np.ndarray:
        return self.level(depth)[node]


def densify_ring(A: SparseMatrix, B: SparseMatrix, backend: Backend | None = None,
                 config: DensifyConfig | None = None, report: Report | None = None,
                 rng=None, engine: str = "level") -> SparseMatrix:
    """AB over an arbitrary ring; correct w.h.p. (Monte Carlo)."""
    config = config or DensifyConfig()
    if A.domain != B.domain:
        raise ValueError("domains differ")
    rng = _rng(config, rng)
    m_in = A.nnz + B.nnz
    L = config.L or default_L(m_in)
    w = config.w or default_w(m_in)
    leaf = config.leaf_rows or w
    draws = _SubsetDraws(config.seed, L, w)
    if engine == "level":
        return _ring_level(A, B, w, L, leaf, draws, backend, config, report, rng)
    if engine == "recursive":
        return _ring_rec(A, B, w, L, leaf, draws, backend, config, report, rng, 0, 0)
    raise ValueError(f"unknown engine {engine!r}")


def _fold(A: SparseMatrix, bits: np.ndarray, w: int) -> SparseMatrix:
    """Child l of a node: row g is the sum of rows g*w + t over t in I_l."""
    L = bits.shape[0]
    xc = -(-A.shape[0] // w)
    grp = A.rows // w
    pos = A.rows % w
    sel = bits[:, pos]                       # (L, nnz)
    ell, e = np.nonzero(sel)
    return SparseMatrix.from_arrays((L * xc, A.shape[1]), ell * xc + grp[e], A.cols[e],
                                    A.values[e], A.domain, validate=False)


def _ring_rec(A, B, w, L, leaf, draws, backend, config, report, rng, depth, node):
    x = A.shape[0]
    if report is not None:
        report.ring_nodes += 1
    if x <= leaf:
        return sparse_product(A, B)
    xc = -(-x // w)
    bits = draws.bits(depth, node)
    stacked = _fold(A, bits, w)
    supports = []
    for ell in range(L):
        Al = stacked.select_rows(np.arange(ell * xc, (ell + 1) * xc))
        Cl = _ring_rec(Al, B, w, L, leaf, draws, backend, config, report, rng, depth + 1,
                       node * L + ell)
        if Cl.nnz:
            supports.append(_lift_pairs(Cl, w, x))
    if supports:
        S = SupportSet((x, B.shape[1]), np.concatenate([s.rows for s in supports]),
                       np.concatenate([s.cols for s in supports]))
    else:
        S = SupportSet((x, B.shape[1]), [], [])
    if report is not None:
        report.recursion.append(RecursionStep("ring", depth, x, len(S),
                                              sum(len(s) for s in supports)))
    return recover(A, B, S, backend, config, report, rng)


def _fold_level(P: SparseMatrix, xp: int, bits: np.ndarray, w: int) -> SparseMatrix:
    """Fold every node of a stacked level at once."""
    n_nodes, L, _ = bits.shape
    xc = -(-xp // w)
    node = P.rows // xp
    q = P.rows % xp
    grp = q // w
    pos = q % w
    y = P.shape[1]
    n_rows = n_nodes * L * xc
    # sel[e, l]: entry e of P goes to child l of its node
    sel = bits[node, :, pos]
    e, ell = np.nonzero(sel)
    crow = (node[e] * L + ell) * xc + grp[e]
    dom = P.domain
    if dom.is_word and n_rows * y <= (1 << 25) and e.size:
        vals = P.values[e]
        amax = int(np.abs(P.values).max())
        if amax * w < (1 << 53):
            acc = np.bincount(crow * y + P.cols[e], weights=vals.astype(np.float64),
                              minlength=n_rows * y)
            acc = np.rint(acc).astype(np.int64)
            if dom.kind == "zmod":
                acc = np.mod(acc, dom.modulus)
            idx = np.flatnonzero(acc)
            return SparseMatrix((n_rows, y), idx // y, idx % y, acc[idx], dom)
    return SparseMatrix.from_arrays((n_rows, y), crow, P.cols[e], P.values[e], dom,
                                    validate=False)


def _lift_level(C: SparseMatrix, n_nodes: int, L: int, xc: int, xp: int, w: int) -> SupportSet:
    """Parent candidates from the stacked child product: union over the L
    children of each node, then every group of w parent rows."""
    z = C.shape[1]
    node = C.rows // (L * xc)
    g = C.rows % xc
    key = (node * xc + g) * z + C.cols
    n_keys = n_nodes * xc * z
    if n_keys <= (1 << 26):
        mark = np.zeros(n_keys, dtype=bool)
        mark[key] = True
        uk = np.flatnonzero(mark)
    else:
        uk = np.unique(key)
    pg, j = uk // z, uk % z
    nd, gg = pg // xc, pg % xc
    t = np.arange(w)
    local = gg[:, None] * w + t[None, :]
    rows = nd[:, None] * xp + local
    keep = local < xp
    cols = np.broadcast_to(j[:, None], local.shape)
    r, c = rows[keep], cols[keep]
    order = np.lexsort((c, r))
    return SupportSet((n_nodes * xp, z), r[order], c[order], trusted=True)


def _ring_level(A, B, w, L, leaf, draws, backend, config, report, rng):
    stacks = [A]
    xs = [A.shape[0]]
    nodes = [1]
    while xs[-1] > leaf:
        bits = draws.level(len(xs) - 1)
        stacks.append(_fold_level(stacks[-1], xs[-1], bits, w))
        xs.append(-(-xs[-1] // w))
        nodes.append(nodes[-1] * L)
    if report is not None:
        report.ring_nodes += sum(nodes)
    C = sparse_product(stacks[-1], B)
    for d in range(len(stacks) - 2, -1, -1):
        S = _lift_level(C, nodes[d], L, xs[d + 1], xs[d], w)
        if report is not None:
            report.recursion.append(RecursionStep("ring", d, xs[d], len(S), C.nnz))
        C = recover(stacks[d], B, S, backend, config, report, rng)
    return C
