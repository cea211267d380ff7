"""The sparse multiplication exponent sigma(r).

sigma(r) is the unique sigma with omega(sigma - 1, 2 - sigma, 1 + r - sigma) = sigma.
It always lies in [max(1, r), 1 + r/2], the map sigma -> sigma - omega(...)
is increasing there, so the smallest sigma whose LP bound satisfies
omega_upper(...) <= sigma is found by bisection.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass

import numpy as np

from .omega import OmegaTable, default_table
from .simplex import linprog

MU = 0.5286
ALPHA = 0.3138
FEAS_TOL = 1e-9


def _check_r(r: float) -> float:
    r = float(r)
    if not 0.0 <= r <= 2.0 + 1e-12:
        raise ValueError(f"r={r} outside [0, 2]")
    return min(r, 2.0)


def sigma_trivial(r: float) -> tuple[float, float]:
    r = _check_r(r)
    return (max(1.0, r), 1.0 + r / 2)


def sigma_closed_form_omega2(r: float) -> float:
    r = _check_r(r)
    return max(1.0 + r / 3, r)


def sigma_algebraic(r: float, mu: float = MU, alpha: float = ALPHA) -> float:
    r = _check_r(r)
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must lie in (0, 1]")
    if not 0.5 <= mu <= 1.0:
        raise ValueError("mu must lie in [1/2, 1]")
    return max(1.0 + r * mu / (1 + mu),
               (2 + alpha) * mu / (1 + mu) + r * (1 - alpha * mu) / (1 + mu),
               r)


def _dims(sigma: float, r: float, convention: str):
    if convention == "definition":
        a = sigma - 1
    elif convention == "printed":
        a = 1 + sigma
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return a, 2 - sigma, 1 + r - sigma


def lp_bound(sigma: float, r: float, table: OmegaTable, convention: str = "definition") -> float:
    a, b, c = _dims(sigma, r, convention)
    return table.bound(max(a, 0.0), max(b, 0.0), max(c, 0.0)).value


def _feasible(sigma, r, table, convention):
    return lp_bound(sigma, r, table, convention) <= sigma + FEAS_TOL


class SigmaInfeasible(ValueError):
    """No sigma in the bracket satisfies the LP."""


def sigma_numeric(r: float, table: OmegaTable | None = None, tol: float = 1e-4,
                  convention: str = "definition", max_iter: int = 60) -> float:
    """Smallest sigma certified by the table, to within ``tol`` (never below it).

    ``convention='printed'`` uses first dimension 1 + sigma instead of
    sigma - 1; that program is infeasible on the whole bracket and raises
    ``SigmaInfeasible``.
    """
    r = _check_r(r)
    table = table if table is not None else default_table()
    lo, hi = sigma_trivial(r)
    if not _feasible(hi, r, table, convention):
        raise SigmaInfeasible(f"LP infeasible at sigma = {hi} for r = {r} ({convention})")
    if _feasible(lo, r, table, convention):
        return lo
    # invariant: lo infeasible, hi feasible
    for _ in range(max_iter):
        if hi - lo <= tol / 4:
            break
        mid = (lo + hi) / 2
        if _feasible(mid, r, table, convention):
            hi = mid
        else:
            lo = mid
    return hi


def sigma_direct(r: float, table: OmegaTable | None = None) -> tuple[float, np.ndarray]:
    """Joint LP in (sigma, lam): minimise sigma directly.  Returns (sigma, lam)."""
    r = _check_r(r)
    table = table if table is not None else default_table()
    rows = table.rows
    n = len(rows)
    # variables [sigma, lam_1..lam_n]
    c = np.zeros(n + 1)
    c[0] = 1.0
    A_eq = np.zeros((3, n + 1))
    A_eq[0, 0], A_eq[0, 1:] = -1.0, rows[:, 0]   # sum lam a = sigma - 1
    A_eq[1, 0], A_eq[1, 1:] = 1.0, rows[:, 1]    # sum lam b = 2 - sigma
    A_eq[2, 0], A_eq[2, 1:] = 1.0, rows[:, 2]    # sum lam c = 1 + r - sigma
    b_eq = np.array([-1.0, 2.0, 1.0 + r])
    A_ub = np.zeros((3, n + 1))
    A_ub[0, 0], A_ub[0, 1:] = -1.0, rows[:, 3]   # sum lam w <= sigma
    A_ub[1, 0] = -1.0                            # sigma >= max(1, r)
    A_ub[2, 0] = 1.0                             # sigma <= 1 + r/2
    lo, hi = sigma_trivial(r)
    b_ub = np.array([0.0, -lo, hi])
    res = linprog(c, A_eq=A_eq, b_eq=b_eq, A_ub=A_ub, b_ub=b_ub)
    if res.status != "optimal":
        raise SigmaInfeasible(f"joint LP {res.status} at r = {r}")
    return float(res.x[0]), res.x[1:]


def solve_mu(table: OmegaTable | None = None, tol: float = 1e-9) -> float:
    """mu with omega_upper(mu, 1, 1) = 1 + 2 mu under the table."""
    table = table if table is not None else default_table()
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if table.bound(mid, 1, 1).value <= 1 + 2 * mid + FEAS_TOL:
            hi = mid
        else:
            lo = mid
    return hi


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad grid {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int(round((stop - start) / step))
        return [round(start + k * step, 10) for k in range(n + 1)]
    return [float(p) for p in text.split(",") if p.strip()]


@dataclass
class SweepRow:
    r: float
    sigma: float
    method: str


def sigma_sweep(grid, table: OmegaTable | None = None, method: str = "lp",
                tol: float = 1e-4, mu: float = MU, alpha: float = ALPHA) -> list[SweepRow]:
    out = []
    for r in grid:
        if method == "lp":
            s = sigma_numeric(r, table, tol)
        elif method == "algebraic":
            s = sigma_algebraic(r, mu, alpha)
        elif method == "closed-form-omega2":
            s = sigma_closed_form_omega2(r)
        elif method == "trivial":
            s = sigma_trivial(r)[1]
        else:
            raise ValueError(f"unknown method {method!r}")
        out.append(SweepRow(float(r), float(s), method))
    return out


def sweep_to_csv(rows: list[SweepRow], dst=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "sigma", "method"])
    for row in rows:
        w.writerow([f"{row.r:.2f}", f"{row.sigma:.4f}", row.method])
    text = buf.getvalue()
    if isinstance(dst, (str, os.PathLike)):
        with open(dst, "w") as fh:
            fh.write(text)
    elif dst is not None:
        dst.write(text)
    return text


def sweep_certificates(grid, table: OmegaTable | None = None) -> str:
    """JSON with the joint-LP weight vector per grid point."""
    table = table if table is not None else default_table()
    out = []
    for r in grid:
        s, lam = sigma_direct(r, table)
        used = [
            {"a": float(row[0]), "b": float(row[1]), "c": float(row[2]),
             "omega": float(row[3]), "lambda": float(v)}
            for row, v in zip(table.rows, lam) if v > 1e-12
        ]
        out.append({"r": float(r), "sigma": s, "certificate": used})
    return json.dumps(out, indent=2)
