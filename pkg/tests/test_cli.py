import csv
import json

import pytest

from sparsemm import BOOL, INT, SparseMatrix, naive_multiply, read_matrix_market, write_matrix_market
from sparsemm.cli import main
from sparsemm.generators import random_pair
from sparsemm.graphs import random_digraph, random_tripartite, write_digraph, write_tripartite


@pytest.fixture
def files(tmp_path):
    A, B = random_pair(20, 15, 18, 0.15, BOOL, seed=1)
    write_matrix_market(A, tmp_path / "a.mtx")
    write_matrix_market(B, tmp_path / "b.mtx")
    P, Q = random_pair(20, 15, 18, 0.15, INT, seed=2)
    write_matrix_market(P, tmp_path / "p.mtx")
    write_matrix_market(Q, tmp_path / "q.mtx")
    return tmp_path, (A, B), (P, Q)


def test_multiply_then_verify(files):
    d, (A, B), _ = files
    rc = main(["multiply", "--domain", "bool", str(d / "a.mtx"), str(d / "b.mtx"),
               "-o", str(d / "c.mtx"), "--report", str(d / "r.json")])
    assert rc == 0
    assert read_matrix_market(d / "c.mtx", BOOL) == naive_multiply(A, B)
    assert main(["verify", str(d / "a.mtx"), str(d / "b.mtx"), str(d / "c.mtx")]) == 0
    rep = json.loads((d / "r.json").read_text())
    assert rep["backend_calls"] >= 1 and "recursion" in rep


def test_verify_failure_exit_code(files):
    d, _, (P, Q) = files
    C = naive_multiply(P, Q).to_dict()
    k = next(iter(C))
    C[k] += 1
    bad = SparseMatrix.from_triplets([(i, j, v) for (i, j), v in C.items()], 20, 18, INT)
    write_matrix_market(bad, d / "bad.mtx")
    for method in ("exact", "freivalds"):
        assert main(["verify", "--method", method, str(d / "p.mtx"), str(d / "q.mtx"),
                     str(d / "bad.mtx")]) == 1
    assert main(["correct", str(d / "p.mtx"), str(d / "q.mtx"), str(d / "bad.mtx"),
                 "-o", str(d / "fixed.mtx")]) == 0
    assert main(["verify", str(d / "p.mtx"), str(d / "q.mtx"), str(d / "fixed.mtx")]) == 0


def test_malformed_inputs(files, tmp_path):
    d, _, _ = files
    (tmp_path / "junk.mtx").write_text("not a matrix\n")
    assert main(["multiply", str(tmp_path / "junk.mtx"), str(d / "b.mtx")]) == 2
    assert main(["multiply", str(tmp_path / "missing.mtx"), str(d / "b.mtx")]) == 2
    assert main(["multiply", "--delta", "x", str(d / "a.mtx"), str(d / "b.mtx")]) == 2
    assert main(["multiply", "--domain", "reals", str(d / "a.mtx"), str(d / "b.mtx")]) == 2
    assert main(["multiply", str(d / "a.mtx"), str(d / "a.mtx")]) == 2
    assert main(["nonsense"]) == 2
    (tmp_path / "t.txt").write_text("X Y 0\n")
    assert main(["triangle", str(tmp_path / "t.txt")]) == 2


def test_exponent_sweep(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["exponent", "--sweep", "0:2:0.05", "-o", str(out),
                 "--certificates", str(tmp_path / "c.json")]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 41 and rows[0] == {"r": "0.00", "sigma": "1.0000", "method": "lp"}
    assert len(json.loads((tmp_path / "c.json").read_text())) == 41
    assert main(["exponent", "--r", "1", "--convention", "printed"]) == 1
    (tmp_path / "bad.csv").write_text("a,b\n1,2\n")
    assert main(["exponent", "--r", "1", "--table", str(tmp_path / "bad.csv")]) == 2


def test_triangle_deterministic(tmp_path):
    args = ["triangle", "--gen", "random", "--seed", "7", "--n", "20", "--check"]
    assert main(args + ["-o", str(tmp_path / "1.txt")]) == 0
    assert main(args + ["-o", str(tmp_path / "2.txt")]) == 0
    assert (tmp_path / "1.txt").read_text() == (tmp_path / "2.txt").read_text()
    G = random_tripartite(6, 6, 6, 0.4, seed=3)
    write_tripartite(G, tmp_path / "g.txt")
    assert main(["triangle", str(tmp_path / "g.txt"), "--mode", "count", "--check",
                 "-o", str(tmp_path / "c.txt")]) == 0
    assert main(["triangle", "--gen", "psaet", "--n", "20", "--check", "-o", str(tmp_path / "p.txt")]) == 0


def test_closure_cli(tmp_path):
    G = random_digraph(25, 0.08, seed=4)
    write_digraph(G, tmp_path / "g.txt")
    assert main(["closure", str(tmp_path / "g.txt"), "--check", "-o", str(tmp_path / "t.txt")]) == 0
    assert main(["closure", "--n", "30", "--self-loops", "cycles", "--check",
                 "-o", str(tmp_path / "u.txt")]) == 0


def test_bench_cli(tmp_path):
    assert main(["bench", "--family", "fully-sparse", "planted", "--m", "500", "--seeds", "2",
                 "--workers", "2", "--csv", str(tmp_path / "b.csv"),
                 "--json", str(tmp_path / "b.json")]) == 0
    rows = list(csv.DictReader((tmp_path / "b.csv").open()))
    assert len(rows) == 4
    assert list(rows[0]) == ["instance", "seed", "m_in", "m_out", "max_xz_cap", "time_ms", "mode"]
    detail = json.loads((tmp_path / "b.json").read_text())
    assert len(detail) == 4 and "recursion_depth" in detail[0]["detail"]
