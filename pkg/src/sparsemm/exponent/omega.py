"""Tables of certified bounds on rectangular matrix multiplication exponents.

A row (a, b, c, w) states omega(a, b, c) <= w.  Bounds combine by scaling
and subadditivity, so the best bound a table certifies for a query (a, b, c)
is the linear program

    minimize  sum_i lam_i w_i   s.t.  sum_i lam_i (a_i, b_i, c_i) = (a, b, c),  lam >= 0.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from importlib import resources

import numpy as np

from .simplex import linprog

SANDWICH_TOL = 1e-9

TRIVIAL_ROWS = [(1.0, 0.0, 0.0, 1.0), (1.0, 1.0, 0.0, 2.0)]


class OmegaTableError(ValueError):
    """A row is malformed or violates max pairwise sum <= w <= a+b+c."""


@dataclass
class OmegaBound:
    value: float
    weights: np.ndarray      # lam, aligned with table.rows
    rows: np.ndarray


class OmegaTable:
    """Permutation-closed set of bounds; the trivial rows are always present."""

    def __init__(self, rows=(), name: str = "table"):
        self.name = name
        seen = {}
        for row in list(TRIVIAL_ROWS) + [tuple(r) for r in rows]:
            if len(row) != 4:
                raise OmegaTableError(f"row {row!r} must have four fields")
            a, b, c, w = (float(v) for v in row)
            if min(a, b, c) < 0:
                raise OmegaTableError(f"negative dimension in {row!r}")
            lo = max(a + b, a + c, b + c)
            if w < lo - SANDWICH_TOL or w > a + b + c + SANDWICH_TOL:
                raise OmegaTableError(
                    f"bound {w} for ({a}, {b}, {c}) outside [{lo}, {a + b + c}]")
            for p in set(itertools.permutations((a, b, c))):
                key = tuple(round(v, 12) for v in p)
                if key not in seen or w < seen[key]:
                    seen[key] = w
        keys = sorted(seen)
        self.rows = np.array([k + (seen[k],) for k in keys], dtype=float)
        self._dims = self.rows[:, :3].T.copy()
        self._w = self.rows[:, 3].copy()

    def __len__(self):
        return len(self.rows)

    def __repr__(self):
        return f"OmegaTable({self.name}, {len(self)} rows)"

    def lookup(self, a, b, c):
        key = tuple(round(float(v), 12) for v in (a, b, c))
        for r in self.rows:
            if tuple(round(v, 12) for v in r[:3]) == key:
                return float(r[3])
        return None

    # ------------------------------------------------------------ queries
    def bound(self, a: float, b: float, c: float) -> OmegaBound:
        q = np.array([a, b, c], dtype=float)
        if np.any(q < -SANDWICH_TOL):
            raise ValueError("dimensions must be nonnegative")
        q = np.maximum(q, 0.0)
        scale = float(q.max())
        if scale == 0.0:
            return OmegaBound(0.0, np.zeros(len(self)), self.rows)
        res = linprog(self._w, A_eq=self._dims, b_eq=q / scale)
        if res.status != "optimal":
            # cannot happen with the unit rows present; keep the trivial bound
            return OmegaBound(float(q.sum()), np.zeros(len(self)), self.rows)
        return OmegaBound(res.fun * scale, res.x * scale, self.rows)

    # ------------------------------------------------------------ io
    @classmethod
    def from_csv(cls, src, name: str | None = None) -> "OmegaTable":
        if isinstance(src, (str, os.PathLike)):
            with open(src, newline="") as fh:
                text = fh.read()
            name = name or os.path.basename(str(src))
        else:
            text = src.read()
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise OmegaTableError("empty table")
        reader = csv.DictReader(io.StringIO("\n".join(lines)))
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["a", "b", "c", "omega"]:
            raise OmegaTableError("header must be a,b,c,omega")
        rows = []
        for n, rec in enumerate(reader, start=2):
            try:
                rows.append(tuple(float(Decimal(rec[k].strip())) for k in ("a", "b", "c", "omega")))
            except (InvalidOperation, AttributeError, TypeError):
                raise OmegaTableError(f"line {n}: non-decimal value") from None
        return cls(rows, name=name or "table")

    def to_csv(self, dst) -> None:
        out = ["a,b,c,omega"] + [",".join(f"{v:g}" for v in r) for r in self.rows]
        text = "\n".join(out) + "\n"
        if isinstance(dst, (str, os.PathLike)):
            with open(dst, "w") as fh:
                fh.write(text)
        else:
            dst.write(text)

    @classmethod
    def packaged(cls, filename: str) -> "OmegaTable":
        ref = resources.files("sparsemm") / "data" / filename
        with ref.open("r") as fh:
            return cls.from_csv(fh, name=filename)

    @classmethod
    def default(cls) -> "OmegaTable":
        return cls.packaged("omega_default.csv")

    @classmethod
    def omega_two(cls) -> "OmegaTable":
        return cls.packaged("omega_two.csv")


def omega_upper(a: float, b: float, c: float, table: OmegaTable | None = None) -> float:
    """Best bound on omega(a, b, c) certified by ``table`` (default table if None)."""
    table = table if table is not None else default_table()
    return table.bound(a, b, c).value


_DEFAULT = None


def default_table() -> OmegaTable:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = OmegaTable.default()
    return _DEFAULT
