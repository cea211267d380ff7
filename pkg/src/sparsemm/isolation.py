"""Hash families that isolate every pair of a support set.

For a set S of (row, col) pairs and a hash h : cols -> buckets, the pair
(i, j) is isolated when no other (i, j') in S has h(j') == h(j).  A family
isolates S when each pair is isolated by at least one member.

Two ways to get one:

* random: draw functions uniformly; O(log m) of them work w.h.p. when the
  number of buckets is at least twice the row degree;
* deterministic: method of conditional expectations.  Each round fixes one
  function column by column, picking the bucket whose half of the bucket
  range has the smaller mean collision count (binary search, ties go low).
  A round leaves at most half of the still-active pairs unisolated, so at
  most floor(log2 |S|) + 1 functions are built.

The deterministic builder has two engines that must agree bit for bit: a
numba kernel over dense per-row Fenwick trees and ``IsolationState``, a
plain Python version keeping only touched buckets in dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .matrix import SupportSet


@dataclass
class RoundStats:
    active_before: int
    collisions: int
    active_after: int


@dataclass
class HashFamily:
    """``functions[t, j]`` is the bucket of column j under the t-th function."""

    z: int
    buckets: int
    functions: np.ndarray
    rounds: list = field(default_factory=list)

    def __len__(self):
        return int(self.functions.shape[0])

    def __iter__(self):
        return iter(self.functions)


def sample_random_family(z: int, buckets: int, count: int, seed=None) -> HashFamily:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    funcs = rng.integers(0, buckets, size=(count, z), dtype=np.int64)
    return HashFamily(z, buckets, funcs)


def isolated_mask(S: SupportSet, h: np.ndarray) -> np.ndarray:
    """Boolean mask over the pairs of S: isolated under h."""
    if len(S) == 0:
        return np.zeros(0, dtype=bool)
    b = h[S.cols]
    key = S.rows * (int(h.max()) + 1) + b
    _, inv, cnt = np.unique(key, return_inverse=True, return_counts=True)
    return cnt[inv] == 1


def isolated_pairs(S: SupportSet, h: np.ndarray) -> set:
    m = isolated_mask(S, h)
    return set(zip(S.rows[m].tolist(), S.cols[m].tolist()))


def family_isolates(S: SupportSet, family: HashFamily) -> bool:
    done = np.zeros(len(S), dtype=bool)
    for h in family:
        done |= isolated_mask(S, h)
    return bool(done.all())


def count_collisions(S: SupportSet, active: np.ndarray, h: np.ndarray) -> int:
    """|C_H(h)| from scratch: triples (i, j, j'), j != j', (i, j) active,
    (i, j') in S, both columns assigned (h >= 0) to the same bucket."""
    total = 0
    by_row: dict = {}
    for p, (i, j) in enumerate(zip(S.rows.tolist(), S.cols.tolist())):
        by_row.setdefault(i, []).append((p, j))
    for lst in by_row.values():
        for p, j in lst:
            if not active[p] or h[j] < 0:
                continue
            for _, j2 in lst:
                if j2 != j and h[j2] >= 0 and h[j2] == h[j]:
                    total += 1
    return total


# ---------------------------------------------------------------- reference


class _TouchedFenwick:
    """Fenwick tree over n buckets storing only touched nodes."""

    __slots__ = ("n", "t")

    def __init__(self, n: int):
        self.n = n
        self.t: dict = {}

    def add(self, b: int, d: int = 1):
        k = b + 1
        t = self.t
        while k <= self.n:
            t[k] = t.get(k, 0) + d
            k += k & -k

    def prefix(self, b: int) -> int:
        """Sum over buckets [0, b)."""
        s = 0
        t = self.t
        k = b
        while k > 0:
            s += t.get(k, 0)
            k -= k & -k
        return s

    def point(self, b: int) -> int:
        return self.prefix(b + 1) - self.prefix(b)


class IsolationState:
    """Counters for one round of the deterministic construction.

    ``M[i]`` counts, per bucket, the pairs (i, j) of S with h(j) assigned
    there; ``MH[i]`` does the same for the active pairs only.
    """

    def __init__(self, S: SupportSet, buckets: int, active: np.ndarray | None = None):
        self.S = S
        self.buckets = int(buckets)
        self.active = np.ones(len(S), dtype=bool) if active is None else active.copy()
        self.M: dict = {}
        self.MH: dict = {}
        order = np.lexsort((S.rows, S.cols))
        self.col_ptr = np.searchsorted(S.cols[order], np.arange(S.shape[1] + 1))
        self.col_pairs = order
        self.collisions = 0

    def _pairs_of(self, j):
        return self.col_pairs[self.col_ptr[j]:self.col_ptr[j + 1]]

    def _row(self, table, i):
        f = table.get(i)
        if f is None:
            f = table[i] = _TouchedFenwick(self.buckets)
        return f

    def delta(self, j: int, b: int) -> int:
        """Increase of |C_H| when column j is sent to bucket b."""
        d = 0
        for p in self._pairs_of(j):
            i = int(self.S.rows[p])
            if self.active[p] and i in self.M:
                d += self.M[i].point(b)
            if i in self.MH:
                d += self.MH[i].point(b)
        return d

    def _range(self, j, lo, hi):
        d = 0
        for p in self._pairs_of(j):
            i = int(self.S.rows[p])
            if self.active[p] and i in self.M:
                f = self.M[i]
                d += f.prefix(hi) - f.prefix(lo)
            if i in self.MH:
                f = self.MH[i]
                d += f.prefix(hi) - f.prefix(lo)
        return d

    def select_bucket(self, j: int) -> int:
        lo, hi = 0, self.buckets
        while hi - lo > 1:
            mid = (lo + hi) // 2
            d1 = self._range(j, lo, mid)
            d2 = self._range(j, mid, hi)
            # compare means d1/|B1| and d2/|B2|; ties go to the lower half
            if d1 * (hi - mid) <= d2 * (mid - lo):
                hi = mid
            else:
                lo = mid
        return lo

    def assign(self, j: int, b: int) -> None:
        self.collisions += self.delta(j, b)
        for p in self._pairs_of(j):
            i = int(self.S.rows[p])
            self._row(self.M, i).add(b)
            if self.active[p]:
                self._row(self.MH, i).add(b)


def _check_degree(S: SupportSet, s: int):
    if len(S) and S.max_degree() > s:
        raise ValueError(f"row degree {S.max_degree()} exceeds s={s}")


def _build_python(S: SupportSet, z: int, buckets: int):
    active = np.ones(len(S), dtype=bool)
    funcs, rounds = [], []
    col_has = np.zeros(z, dtype=bool)
    col_has[S.cols] = True
    while active.any():
        st = IsolationState(S, buckets, active)
        h = np.zeros(z, dtype=np.int64)
        for j in range(z):
            if not col_has[j]:
                continue
            b = st.select_bucket(j)
            st.assign(j, b)
            h[j] = b
        iso = isolated_mask(S, h)
        before = int(active.sum())
        active &= ~iso
        rounds.append(RoundStats(before, st.collisions, int(active.sum())))
        funcs.append(h)
    arr = np.array(funcs, dtype=np.int64).reshape(len(funcs), z)
    return arr, rounds


# ---------------------------------------------------------------- numba


@njit(cache=True)
def _fw_add(t, base, n, b):
    k = b + 1
    while k <= n:
        t[base + k] += 1
        k += k & -k


@njit(cache=True)
def _fw_prefix(t, base, b):
    s = 0
    k = b
    while k > 0:
        s += t[base + k]
        k -= k & -k
    return s


@njit(cache=True)
def _build_kernel(nr, z, nb, col_ptr, col_pairs, pair_row, pair_col, max_rounds):
    P = pair_row.shape[0]
    active = np.ones(P, np.bool_)
    funcs = np.zeros((max_rounds, z), np.int64)
    stats = np.zeros((max_rounds, 3), np.int64)
    stride = nb + 1
    n_active = P
    r = 0
    while n_active > 0 and r < max_rounds:
        M = np.zeros(nr * stride, np.int64)
        MH = np.zeros(nr * stride, np.int64)
        coll = 0
        for j in range(z):
            a = col_ptr[j]
            e = col_ptr[j + 1]
            if a == e:
                funcs[r, j] = 0
                continue
            lo = 0
            hi = nb
            while hi - lo > 1:
                mid = (lo + hi) // 2
                d1 = 0
                d2 = 0
                for q in range(a, e):
                    p = col_pairs[q]
                    base = pair_row[p] * stride
                    if active[p]:
                        x0 = _fw_prefix(M, base, lo)
                        x1 = _fw_prefix(M, base, mid)
                        x2 = _fw_prefix(M, base, hi)
                        d1 += x1 - x0
                        d2 += x2 - x1
                    y0 = _fw_prefix(MH, base, lo)
                    y1 = _fw_prefix(MH, base, mid)
                    y2 = _fw_prefix(MH, base, hi)
                    d1 += y1 - y0
                    d2 += y2 - y1
                if d1 * (hi - mid) <= d2 * (mid - lo):
                    hi = mid
                else:
                    lo = mid
            b = lo
            for q in range(a, e):
                p = col_pairs[q]
                base = pair_row[p] * stride
                if active[p]:
                    coll += _fw_prefix(M, base, b + 1) - _fw_prefix(M, base, b)
                coll += _fw_prefix(MH, base, b + 1) - _fw_prefix(MH, base, b)
            funcs[r, j] = b
            for q in range(a, e):
                p = col_pairs[q]
                base = pair_row[p] * stride
                _fw_add(M, base, nb, b)
                if active[p]:
                    _fw_add(MH, base, nb, b)
        left = 0
        for p in range(P):
            if active[p]:
                base = pair_row[p] * stride
                b = funcs[r, pair_col[p]]
                if _fw_prefix(M, base, b + 1) - _fw_prefix(M, base, b) == 1:
                    active[p] = False
                else:
                    left += 1
        stats[r, 0] = n_active
        stats[r, 1] = coll
        stats[r, 2] = left
        n_active = left
        r += 1
    return funcs[:r], stats[:r], n_active


def _build_numba(S: SupportSet, z: int, buckets: int):
    if len(S) == 0:
        return np.zeros((0, z), dtype=np.int64), []
    present, row_c = np.unique(S.rows, return_inverse=True)
    order = np.lexsort((S.rows, S.cols)).astype(np.int64)
    col_ptr = np.searchsorted(S.cols[order], np.arange(z + 1)).astype(np.int64)
    max_rounds = int(np.log2(len(S))) + 2
    funcs, stats, left = _build_kernel(len(present), z, buckets, col_ptr, order,
                                       row_c.astype(np.int64), S.cols.astype(np.int64), max_rounds)
    if left:
        raise RuntimeError("deterministic isolation did not converge; is s below the row degree?")
    rounds = [RoundStats(int(a), int(c), int(b)) for a, c, b in stats]
    return np.ascontiguousarray(funcs), rounds


def build_deterministic_family(S: SupportSet, z: int | None = None, s: int | None = None,
                               engine: str = "numba") -> HashFamily:
    """Family of hashes [z] -> [2s] isolating S.

    ``s`` must be at least the largest row degree of S; it defaults to it.
    """
    z = S.shape[1] if z is None else int(z)
    if s is None:
        s = max(1, S.max_degree())
    _check_degree(S, s)
    buckets = 2 * int(s)
    if engine == "numba":
        funcs, rounds = _build_numba(S, z, buckets)
    elif engine == "python":
        funcs, rounds = _build_python(S, z, buckets)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return HashFamily(z, buckets, funcs, rounds)
