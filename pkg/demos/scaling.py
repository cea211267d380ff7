"""Dense footprint versus bounding box on fully sparse inputs.

For m_out close to m_in the largest dense product handed to a backend
grows like m, while the x*z box a plain dense product would need grows
like m**2.
"""

import sys

from sparsemm.bench import run_one

sizes = [int(a) for a in sys.argv[1:]] or [1000, 10_000, 100_000]
print(f"{'m':>8} {'m_out':>8} {'max xz':>10} {'per m':>6} {'x*z':>12} {'ms':>9}")
for m in sizes:
    r = run_one("fully-sparse", m, 0)
    print(f"{m:8d} {r.m_out:8d} {r.max_xz_cap:10d} {r.max_xz_cap / (r.m_in + r.m_out):6.2f} "
          f"{r.dense_xz:12d} {r.time_ms:9.1f}")
