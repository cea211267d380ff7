import io

import numpy as np
import pytest
from scipy.optimize import linprog as scipy_linprog

from sparsemm.exponent import (ALPHA, MU, OmegaTable, OmegaTableError, SigmaInfeasible, linprog,
                               omega_upper, parse_grid, sigma_algebraic, sigma_closed_form_omega2,
                               sigma_direct, sigma_numeric, sigma_sweep, sigma_trivial, solve_mu,
                               sweep_certificates, sweep_to_csv)

GRID = parse_grid("0:2:0.05")


def test_simplex_matches_scipy():
    rng = np.random.default_rng(0)
    checked = 0
    for _ in range(200):
        n, me, mu = rng.integers(2, 8), rng.integers(0, 3), rng.integers(0, 4)
        c = rng.normal(size=n)
        A_eq = rng.normal(size=(me, n)) if me else None
        x0 = rng.random(n)
        b_eq = A_eq @ x0 if me else None
        A_ub = rng.normal(size=(mu, n)) if mu else None
        b_ub = A_ub @ x0 + rng.random(mu) if mu else None
        ours = linprog(c, A_eq=A_eq, b_eq=b_eq, A_ub=A_ub, b_ub=b_ub)
        ref = scipy_linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=(0, None),
                            method="highs")
        if ref.status == 0:
            assert ours.status == "optimal"
            assert ours.fun == pytest.approx(ref.fun, abs=1e-6)
            checked += 1
        elif ref.status == 3:
            assert ours.status == "unbounded"
    assert checked > 50


def test_simplex_infeasible():
    res = linprog(np.array([1.0]), A_eq=np.array([[1.0]]), b_eq=np.array([-1.0]))
    assert res.status == "infeasible"


def test_omega_upper_examples():
    triv = OmegaTable()
    assert omega_upper(1, 1, 1, triv) == pytest.approx(3)
    t = OmegaTable.default()
    assert omega_upper(1, 1.3, 1, t) <= 2.6217 + 1e-9
    assert omega_upper(1, 4 / 3, 1, t) <= 2.6507
    assert omega_upper(2, 2, 2, t) == pytest.approx(2 * 2.3719)
    # permutations
    assert omega_upper(1.3, 1, 1, t) == pytest.approx(omega_upper(1, 1, 1.3, t))


def test_exchange_inequality():
    rng = np.random.default_rng(1)
    t = OmegaTable.default()
    for _ in range(100):
        a, b, c = rng.random(3) * 1.5
        a, c = min(a, c), max(a, c)
        d = rng.random() * (c - a) / 2
        assert omega_upper(a + d, b, c - d, t) <= omega_upper(a, b, c, t) + 1e-7


def test_table_validation_and_io():
    with pytest.raises(OmegaTableError):
        OmegaTable([(1, 1, 1, 1.5)])          # below the sandwich
    with pytest.raises(OmegaTableError):
        OmegaTable.from_csv(io.StringIO("x,y,z,w\n1,1,1,2.5\n"))
    with pytest.raises(OmegaTableError):
        OmegaTable.from_csv(io.StringIO("a,b,c,omega\n1,1,one,2.5\n"))
    t = OmegaTable.from_csv(io.StringIO("# comment\na,b,c,omega\n1,1,1,2.5\n"))
    assert t.lookup(1, 1, 1) == 2.5
    buf = io.StringIO()
    t.to_csv(buf)
    buf.seek(0)
    assert np.allclose(OmegaTable.from_csv(buf).rows, t.rows)


def test_sigma_trivial_and_closed_form():
    assert sigma_trivial(0) == (1, 1)
    assert sigma_trivial(2) == (2, 2)
    assert sigma_trivial(1) == (1, 1.5)
    assert sigma_closed_form_omega2(1) == pytest.approx(4 / 3)
    assert sigma_closed_form_omega2(0) == 1
    assert sigma_closed_form_omega2(1.5) == 1.5
    with pytest.raises(ValueError):
        sigma_trivial(2.5)


def test_sigma_algebraic_examples():
    assert sigma_algebraic(1) == pytest.approx(1 + MU / (1 + MU))
    assert abs(sigma_algebraic(1) - 1.3458) < 1e-4
    assert sigma_algebraic(2) == 2
    r = 1 + 1 / (1 + ALPHA)
    assert sigma_algebraic(r) == pytest.approx(r, abs=2e-4)


def test_sigma_numeric_default_table():
    t = OmegaTable.default()
    s1 = sigma_numeric(1.0, t)
    assert abs(s1 - 1.3458) < 5e-4
    assert sigma_numeric(0.0, t) == 1.0
    assert sigma_numeric(2.0, t) == 2.0


def test_printed_convention_is_infeasible():
    with pytest.raises(SigmaInfeasible):
        sigma_numeric(1.0, OmegaTable.default(), convention="printed")


def test_sigma_direct_agrees_with_bisection():
    t = OmegaTable.default()
    for r in (0.3, 0.8, 1.0, 1.4, 1.7):
        s, lam = sigma_direct(r, t)
        assert s == pytest.approx(sigma_numeric(r, t), abs=1e-4)
        assert np.all(lam >= -1e-9)


def test_omega_two_closed_form():
    t = OmegaTable.omega_two()
    for r in GRID:
        assert abs(sigma_numeric(r, t) - sigma_closed_form_omega2(r)) <= 1e-4


def test_sweep_structure():
    t = OmegaTable.default()
    rows = sigma_sweep(GRID, t)
    sig = np.array([r.sigma for r in rows])
    assert np.all(np.diff(sig) >= -1e-9)
    for k in range(1, len(sig) - 1):
        assert sig[k] <= (sig[k - 1] + sig[k + 1]) / 2 + 2e-4
    for r, s in zip(GRID, sig):
        lo, hi = sigma_trivial(r)
        assert lo - 1e-9 <= s <= sigma_algebraic(r) + 1e-4 <= hi + 1e-4


def test_mu_fixed_point():
    t = OmegaTable.default()
    mu = solve_mu(t)
    assert abs(sigma_numeric(1.0, t) - (1 + mu / (1 + mu))) < 0.002


def test_grid_and_csv():
    assert len(GRID) == 41 and GRID[0] == 0 and GRID[-1] == 2
    assert parse_grid("0.5,1") == [0.5, 1.0]
    with pytest.raises(ValueError):
        parse_grid("0:1:0")
    rows = sigma_sweep([0.0], OmegaTable.default())
    assert sweep_to_csv(rows) == "r,sigma,method\n0.00,1.0000,lp\n"
    for m in ("algebraic", "closed-form-omega2", "trivial"):
        assert len(sigma_sweep([0.5, 1.0], method=m)) == 2
    with pytest.raises(ValueError):
        sigma_sweep([1.0], method="guess")


def test_certificates_json():
    import json

    data = json.loads(sweep_certificates([1.0], OmegaTable.default()))
    assert data[0]["r"] == 1.0
    assert abs(data[0]["sigma"] - 1.3458) < 5e-4
    assert data[0]["certificate"]
