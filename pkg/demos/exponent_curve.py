"""The exponent sigma(r) from a table of rectangular bounds.

Prints the numeric curve next to the closed forms and, if matplotlib is
available, saves a plot.  Pass a table CSV (a,b,c,omega) as the first
argument to use other bounds.
"""

import sys

from sparsemm.exponent import (MU, OmegaTable, parse_grid, sigma_algebraic,
                               sigma_closed_form_omega2, sigma_numeric, sigma_trivial, solve_mu)

table = OmegaTable.from_csv(sys.argv[1]) if len(sys.argv) > 1 else OmegaTable.default()
grid = parse_grid("0:2:0.1")
print(f"{table}; mu from table = {solve_mu(table):.4f} (reference {MU})")
print(f"{'r':>5} {'lp':>8} {'algebraic':>10} {'omega=2':>8} {'trivial':>8}")
curve = []
for r in grid:
    s = sigma_numeric(r, table)
    curve.append(s)
    print(f"{r:5.2f} {s:8.4f} {sigma_algebraic(r):10.4f} {sigma_closed_form_omega2(r):8.4f} "
          f"{sigma_trivial(r)[1]:8.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)
plt.plot(grid, curve, label="LP bound")
plt.plot(grid, [sigma_algebraic(r) for r in grid], "--", label="algebraic")
plt.plot(grid, [sigma_closed_form_omega2(r) for r in grid], ":", label="omega = 2")
plt.xlabel("r  (m_out = m_in^r)")
plt.ylabel("sigma(r)")
plt.legend()
plt.savefig("sigma_curve.png", dpi=120)
print("wrote sigma_curve.png")
