import numpy as np
import pytest

from sparsemm import (BOOL, GF2, INT, NONNEG, Report, SparseMatrix, default_delta,
                      multiply_input_sparse, multiply_light, multiply_sparse, naive_multiply,
                      split_heavy_light, zmod)
from sparsemm.domains import ScalarDomain, mat2_ring
from sparsemm.generators import fully_sparse, planted_cancellation, random_pair, random_sparse
from sparsemm.matrix import identity


def test_split_examples(rng):
    A = random_sparse((10, 8), 0.3, INT, rng)
    B = random_sparse((8, 6), 0.3, INT, rng)
    sp = split_heavy_light(A, B, 10)
    assert sp.A2.nnz == 0
    sp = split_heavy_light(A, B, 1)
    counts = A.to_dense().astype(bool).sum(axis=0)
    assert set(sp.light.tolist()) == {k for k in range(8) if counts[k] == 1}
    for delta in (1, 2, 3):
        sp = split_heavy_light(A, B, delta)
        assert set(sp.heavy.tolist()) == {k for k in range(8) if counts[k] > delta}
        assert len(sp.heavy) <= A.nnz / delta
    with pytest.raises(ValueError):
        split_heavy_light(A, B, 0)


def test_light_examples(rng):
    B = random_sparse((5, 7), 0.4, INT, rng)
    assert multiply_light(identity(5, INT), B, 1) == B
    assert multiply_light(identity(5, INT), SparseMatrix.zeros((5, 7), INT), 1).nnz == 0
    for s in range(30):
        A, B = random_pair(20, 15, 18, 0.1, INT, seed=s)
        delta = max(1, int(A.col_counts.max()))
        rep = Report()
        assert multiply_light(A, B, delta, rep) == naive_multiply(A, B)
        assert rep.light_work <= B.nnz * delta
    A = SparseMatrix.from_triplets([(0, 0, 1), (1, 0, 1)], 2, 1, INT)
    with pytest.raises(ValueError):
        multiply_light(A, SparseMatrix.zeros((1, 1), INT), 1)


def test_input_sparse_identity_and_skewed():
    I = identity(6, INT)
    for delta in (1, 3, 6):
        assert multiply_input_sparse(I, I, delta) == I
    rng = np.random.default_rng(0)
    A = random_sparse((40, 30), 0.03, INT, rng)
    d = A.to_dense()
    d[:, 4] = 1
    A = SparseMatrix.from_dense(d, INT)
    B = random_sparse((30, 35), 0.1, INT, rng)
    rep = Report()
    assert multiply_input_sparse(A, B, 5, report=rep) == naive_multiply(A, B)
    assert rep.heavy_calls >= 1


def test_dense_budget_fallback(caplog):
    A, B = random_pair(30, 10, 30, 0.9, INT, seed=1)
    rep = Report()
    with caplog.at_level("WARNING"):
        C = multiply_input_sparse(A, B, 1, report=rep, dense_budget=10)
    assert C == naive_multiply(A, B)
    assert rep.fallbacks >= 1
    assert "dense budget" in caplog.text


def test_strassen_backend():
    for s in range(10):
        A, B = random_pair(30, 30, 30, 0.3, INT, seed=s)
        assert multiply_input_sparse(A, B, 1, "strassen") == naive_multiply(A, B)


def test_delta_invariance():
    for s in range(20):
        A, B = random_pair(25, 20, 22, 0.15, INT, seed=s)
        outs = [multiply_input_sparse(A, B, d) for d in (1, 2, 4, 8, 16, 25)]
        assert all(o == outs[0] for o in outs)


def test_noncommutative_not_transposed():
    dom = ScalarDomain("ring", ring=mat2_ring(2))
    rng = np.random.default_rng(3)
    trip_a = [(i, k, tuple(int(v) for v in rng.integers(0, 2, 4))) for i in range(6) for k in range(2)]
    trip_b = [(k, j, tuple(int(v) for v in rng.integers(0, 2, 4))) for k in range(2) for j in range(2)]
    nz = lambda t: [x for x in t if any(x[2])]  # noqa: E731
    A = SparseMatrix.from_triplets(nz(trip_a), 6, 2, dom)
    B = SparseMatrix.from_triplets(nz(trip_b), 2, 2, dom)
    rep = Report()
    assert multiply_input_sparse(A, B, 1, report=rep) == naive_multiply(A, B)
    assert rep.transposed == 0


def test_default_delta():
    assert default_delta(1) >= 1
    assert default_delta(10**6) == int(np.ceil((10**6) ** (0.5286 / 1.5286)))


def test_multiply_sparse_examples():
    A, B = fully_sparse(1000, seed=0)
    assert multiply_sparse(A, B) == naive_multiply(A, B)
    A, B = planted_cancellation(40, 30, 30, seed=2)
    assert multiply_sparse(A, B) == naive_multiply(A, B)
    E = SparseMatrix.zeros((4, 3), INT)
    assert multiply_sparse(E, random_sparse((3, 5), 0.5, INT, 1)).nnz == 0


def test_multiply_sparse_routes_and_errors():
    A, B = random_pair(10, 10, 10, 0.3, NONNEG, seed=0)
    N = naive_multiply(A, B)
    for route in ("nonneg", "int"):
        assert multiply_sparse(A, B, route=route) == N
    with pytest.raises(ValueError):
        multiply_sparse(A.with_domain(INT), B.with_domain(INT), route="nonneg")
    with pytest.raises(ValueError):
        multiply_sparse(A, B, route="fast")
    with pytest.raises(ValueError):
        multiply_sparse(A, B.T.T.with_domain(INT))
    with pytest.raises(ValueError):
        multiply_sparse(A, random_sparse((3, 3), 0.5, NONNEG, 0))


@pytest.mark.parametrize("dom", [BOOL, NONNEG, INT, GF2, zmod(4)], ids=lambda d: d.name)
def test_multiply_sparse_domains(dom):
    for s in range(25):
        A, B = random_pair(40, 35, 30, [0.01, 0.05, 0.2][s % 3], dom, seed=s)
        assert multiply_sparse(A, B, seed=s) == naive_multiply(A, B)


def test_random_hashing_end_to_end():
    for s in range(20):
        A, B = random_pair(40, 35, 30, 0.1, INT, seed=s)
        assert multiply_sparse(A, B, hashing="rand", seed=s) == naive_multiply(A, B)
