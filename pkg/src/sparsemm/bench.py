"""Seeded benchmark families with instrumentation.

Each run records the input and output sizes, the largest dense footprint
x' * z' handed to a backend, and wall time.  Results go to CSV (one row per
run) and to a JSON mirror carrying the full report summary.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from threading import Lock

from .domains import BOOL, INT, NONNEG
from .generators import fully_sparse, planted_cancellation, rank_one_dense, skewed_degree
from .input_sparse import multiply_sparse
from .report import Report

FAMILIES = ("fully-sparse", "skewed", "planted", "rank1")
CSV_FIELDS = ["instance", "seed", "m_in", "m_out", "max_xz_cap", "time_ms", "mode"]


@dataclass
class BenchRow:
    instance: str
    seed: int
    m_in: int
    m_out: int
    max_xz_cap: int
    time_ms: float
    mode: str
    shape: tuple = ()
    detail: dict = field(default_factory=dict)

    @property
    def dense_xz(self) -> int:
        return self.shape[0] * self.shape[1] if self.shape else 0


def make_instance(family: str, m: int, seed: int):
    """(A, B) with about m input nonzeros."""
    if family == "fully-sparse":
        return fully_sparse(m, seed=seed, domain=BOOL)
    if family == "skewed":
        n = max(4, m // 4)
        return skewed_degree(n, m, seed=seed, domain=NONNEG)
    if family == "planted":
        n = max(4, int(round((m / 0.4) ** 0.5)))
        return planted_cancellation(n, n, n, density=0.2, seed=seed, domain=INT)
    if family == "rank1":
        return rank_one_dense(max(1, m // 2), seed=seed, domain=NONNEG)
    raise ValueError(f"unknown family {family!r}")


def run_one(family: str, m: int, seed: int, **opts) -> BenchRow:
    A, B = make_instance(family, m, seed)
    rep = Report()
    t0 = time.perf_counter()
    C = multiply_sparse(A, B, seed=seed, report=rep, **opts)
    ms = (time.perf_counter() - t0) * 1e3
    mode = f"{A.domain.name}/{opts.get('hash', opts.get('hashing', 'det'))}"
    return BenchRow(f"{family}-m{m}", seed, A.nnz + B.nnz, C.nnz, rep.max_cap, round(ms, 3),
                    mode, (A.shape[0], B.shape[1]), rep.summary())


def run_bench(families=FAMILIES, sizes=(1000,), seeds=(0,), workers: int = 1,
              csv_path=None, json_path=None, **opts) -> list[BenchRow]:
    jobs = [(f, m, s) for f in families for m in sizes for s in seeds]
    rows: list[BenchRow] = []
    lock = Lock()
    fh = open(csv_path, "w", newline="") if csv_path else None
    writer = csv.writer(fh) if fh else None
    if writer:
        writer.writerow(CSV_FIELDS)

    def task(job):
        row = run_one(*job, **opts)
        with lock:
            rows.append(row)
            if writer:
                writer.writerow([getattr(row, k) for k in CSV_FIELDS])
                fh.flush()
        return row

    try:
        if workers > 1:
            with ThreadPoolExecutor(workers) as ex:
                list(ex.map(task, jobs))
        else:
            for j in jobs:
                task(j)
    finally:
        if fh:
            fh.close()
    order = {j: k for k, j in enumerate(jobs)}
    rows.sort(key=lambda r: order.get((r.instance.rsplit("-m", 1)[0],
                                       int(r.instance.rsplit("-m", 1)[1]), r.seed), 0))
    if json_path:
        with open(json_path, "w") as out:
            json.dump([asdict(r) for r in rows], out, indent=2)
    return rows


def rows_to_csv(rows: list[BenchRow]) -> str:
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([getattr(r, k) for k in CSV_FIELDS])
    return buf.getvalue()
