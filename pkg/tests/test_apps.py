import numpy as np
import pytest

from sparsemm import BIGINT, INT, NONNEG, SparseMatrix, naive_multiply
from sparsemm.apps import (ae_triangle_brute, ae_triangle_via_mm, bit_layers, bit_split_multiply,
                           closure_floyd_warshall, correct_product, count_triangles_brute,
                           count_triangles_via_mm, shift_multiply, transitive_closure)
from sparsemm.generators import random_pair
from sparsemm.graphs import Digraph, TripartiteGraph, psaet_tripartite, random_digraph, random_tripartite


def test_triangle_examples():
    one = TripartiteGraph(1, 1, 1, [(0, 0)], [(0, 0)], [(0, 0)])
    assert ae_triangle_via_mm(one) == {(0, 0)}
    path = TripartiteGraph(1, 1, 1, [(0, 0)], [(0, 0)], [])
    assert ae_triangle_via_mm(path) == set()
    empty = TripartiteGraph(3, 3, 3, [], [], [])
    assert ae_triangle_brute(empty) == set()
    full = [(i, j) for i in range(2) for j in range(2)]
    k222 = TripartiteGraph(2, 2, 2, full, full, full)
    assert count_triangles_brute(k222) == {e: 2 for e in full}
    assert count_triangles_via_mm(k222) == {e: 2 for e in full}


def test_triangles_random_and_psaet():
    for s in range(40):
        G = random_tripartite(20, 25, 15, 0.15, seed=s)
        assert ae_triangle_via_mm(G) == ae_triangle_brute(G)
        assert count_triangles_via_mm(G) == count_triangles_brute(G)
    for s in range(5):
        G = psaet_tripartite(40, seed=s)
        assert G.nx == int(np.ceil(40 ** 0.5286))
        assert len(G.exz) == G.nx * 40
        assert count_triangles_via_mm(G) == count_triangles_brute(G)


def test_bit_split_examples():
    A = SparseMatrix.from_triplets([(0, 0, 3)], 1, 1, NONNEG)
    B = SparseMatrix.from_triplets([(0, 0, 5)], 1, 1, NONNEG)
    assert bit_split_multiply(A, B).to_triplets() == [(0, 0, 15)]
    assert len(bit_layers(A)) == 2
    for s in range(20):
        A, B = random_pair(15, 12, 14, 0.2, NONNEG, seed=s)
        for layer in bit_layers(A):
            assert layer.support().pairs() <= A.support().pairs()
        assert bit_split_multiply(A, B) == naive_multiply(A, B)
    with pytest.raises(ValueError):
        bit_layers(SparseMatrix.from_triplets([(0, 0, -1)], 1, 1, INT))


def test_shift_examples():
    A = SparseMatrix.from_triplets([(0, 0, -1)], 1, 1, INT)
    B = SparseMatrix.from_triplets([(0, 0, 1)], 1, 1, INT)
    assert shift_multiply(A, B).to_triplets() == [(0, 0, -1)]
    for s in range(20):
        A, B = random_pair(15, 12, 14, 0.2, INT, seed=s)
        assert shift_multiply(A, B) == naive_multiply(A, B)
        P, Q = random_pair(10, 10, 10, 0.3, NONNEG, seed=s)
        assert shift_multiply(P, Q).to_dict() == naive_multiply(P, Q).to_dict()


def test_shift_wide_values():
    for s in range(5):
        A, B = random_pair(8, 6, 7, 0.4, BIGINT, seed=s)
        assert shift_multiply(A, B) == naive_multiply(A, B)


def _corrupt(C, k, rng):
    D = C.to_dict()
    x, z = C.shape
    cells = rng.choice(x * z, size=k, replace=False)
    for c in cells:
        key = (int(c // z), int(c % z))
        D[key] = D.get(key, 0) + int(rng.choice([-3, -1, 1, 7]))
    return SparseMatrix.from_triplets([(i, j, v) for (i, j), v in D.items()], x, z, C.domain), k


def test_correct_examples():
    A, B = random_pair(30, 20, 25, 0.1, INT, seed=0)
    C = naive_multiply(A, B)
    out, E = correct_product(A, B, C, return_error=True)
    assert out == C and E.nnz == 0
    (i, j), v = next(iter(C.to_dict().items()))
    D = C.to_dict()
    D[(i, j)] = v + 7
    Ct = SparseMatrix.from_triplets([(a, b, w) for (a, b), w in D.items()], *C.shape, INT)
    out, E = correct_product(A, B, Ct, return_error=True)
    assert out == C and E.to_triplets() == [(i, j, -7)]


def test_correct_fifty_corruptions():
    rng = np.random.default_rng(5)
    A, B = random_pair(200, 200, 200, 0.01, INT, seed=5)
    C = naive_multiply(A, B)
    Ct, k = _corrupt(C, 50, rng)
    out, E = correct_product(A, B, Ct, return_error=True)
    assert out == C
    assert E.nnz == (Ct.to_dense() != C.to_dense()).sum()


def test_correct_errors():
    A, B = random_pair(4, 4, 4, 0.5, NONNEG, seed=0)
    with pytest.raises(ValueError):
        correct_product(A, B, naive_multiply(A, B))
    A, B = random_pair(4, 4, 4, 0.5, INT, seed=0)
    with pytest.raises(ValueError):
        correct_product(A, B, SparseMatrix.zeros((3, 4), INT))


def test_closure_examples():
    G = Digraph(3, [(0, 1), (1, 2)])
    assert transitive_closure(G).arc_set() == {(0, 1), (1, 2), (0, 2)}
    assert transitive_closure(Digraph(4, [])).arc_set() == set()
    L = Digraph(2, [(0, 0), (0, 1)])
    assert transitive_closure(L).arc_set() == {(0, 0), (0, 1)}


def test_closure_random_and_idempotent():
    for s in range(30):
        n = int(np.random.default_rng(s).integers(1, 60))
        G = random_digraph(n, 0.05, seed=s)
        for mode in ("input", "cycles"):
            T = transitive_closure(G, self_loops=mode)
            assert T.arc_set() == closure_floyd_warshall(G, mode).arc_set()
        T = transitive_closure(G)
        assert transitive_closure(T).arc_set() == T.arc_set()


def test_closure_round_count():
    rounds = []
    G = Digraph(64, [(i, i + 1) for i in range(63)])
    T = transitive_closure(G, report_rounds=rounds)
    assert len(T.arc_set()) == 64 * 63 // 2
    assert rounds[0] <= 6 + 1
