"""Bounds on the sparse matrix multiplication exponent sigma(r)."""

from .omega import OmegaBound, OmegaTable, OmegaTableError, default_table, omega_upper
from .sigma import (
    ALPHA,
    MU,
    SigmaInfeasible,
    SweepRow,
    lp_bound,
    parse_grid,
    sigma_algebraic,
    sigma_closed_form_omega2,
    sigma_direct,
    sigma_numeric,
    sigma_sweep,
    sigma_trivial,
    solve_mu,
    sweep_certificates,
    sweep_to_csv,
)
from .simplex import LPResult, linprog
