"""Dense two-phase simplex for small linear programs.

    minimize    c @ x
    subject to  A_eq @ x == b_eq,  A_ub @ x <= b_ub,  x >= 0

Bland's rule throughout, so the method terminates on degenerate problems.
Sizes here are tiny (a handful of rows, a few hundred columns).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = 1e-9


@dataclass
class LPResult:
    status: str            # "optimal", "infeasible", "unbounded"
    x: np.ndarray | None
    fun: float | None


def _pivot(T: np.ndarray, basis: list, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = c


def _run(T: np.ndarray, basis: list, ncols: int, max_iter: int) -> str:
    """Optimise the objective held in the last row over columns [0, ncols)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        obj = T[-1, :ncols]
        enter = np.flatnonzero(obj < -EPS)
        if enter.size == 0:
            return "optimal"
        c = int(enter[0])
        colv = T[:m, c]
        pos = colv > EPS
        if not pos.any():
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colv[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + EPS)
        r = min(ties, key=lambda i: basis[i])
        _pivot(T, basis, int(r), c)
    raise RuntimeError("simplex iteration limit reached")


def linprog(c, A_eq=None, b_eq=None, A_ub=None, b_ub=None, max_iter: int = 10000) -> LPResult:
    c = np.asarray(c, dtype=float)
    n = c.size
    rows, rhs = [], []
    n_slack = 0 if A_ub is None else len(b_ub)
    if A_ub is not None:
        A_ub = np.atleast_2d(np.asarray(A_ub, dtype=float))
        for k, (a, b) in enumerate(zip(A_ub, b_ub)):
            slack = np.zeros(n_slack)
            slack[k] = 1.0
            rows.append(np.concatenate([a, slack]))
            rhs.append(float(b))
    if A_eq is not None:
        A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
        for a, b in zip(A_eq, b_eq):
            rows.append(np.concatenate([a, np.zeros(n_slack)]))
            rhs.append(float(b))
    m = len(rows)
    nv = n + n_slack
    if m == 0:
        if np.any(c < -EPS):
            return LPResult("unbounded", None, None)
        return LPResult("optimal", np.zeros(n), 0.0)
    A = np.array(rows)
    b = np.array(rhs)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    # phase 1: one artificial per row
    T = np.zeros((m + 1, nv + m + 1))
    T[:m, :nv] = A
    T[:m, nv:nv + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(nv, nv + m))
    T[-1, :nv] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    _run(T, basis, nv + m, max_iter)
    if -T[-1, -1] > 1e-7:
        return LPResult("infeasible", None, None)
    # drive remaining artificials out of the basis where possible
    for r in range(m):
        if basis[r] >= nv:
            cand = np.flatnonzero(np.abs(T[r, :nv]) > EPS)
            if cand.size:
                _pivot(T, basis, r, int(cand[0]))
    keep = [r for r in range(m) if basis[r] < nv]
    T2 = np.zeros((len(keep) + 1, nv + 1))
    T2[:-1, :nv] = T[keep, :nv]
    T2[:-1, -1] = T[keep, -1]
    basis2 = [basis[r] for r in keep]
    cost = np.concatenate([c, np.zeros(n_slack)])
    T2[-1, :nv] = cost
    for r, bcol in enumerate(basis2):
        T2[-1] -= cost[bcol] * T2[r]
    status = _run(T2, basis2, nv, max_iter)
    if status != "optimal":
        return LPResult(status, None, None)
    x = np.zeros(nv)
    for r, bcol in enumerate(basis2):
        x[bcol] = T2[r, -1]
    return LPResult("optimal", x[:n], float(cost[:n] @ x[:n]))
