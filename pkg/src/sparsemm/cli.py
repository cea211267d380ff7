"""Command line front end.

    sparsemm multiply --domain bool a.mtx b.mtx -o c.mtx
    sparsemm verify a.mtx b.mtx c.mtx
    sparsemm exponent --sweep 0:2:0.05 --table omega.csv
    sparsemm triangle --gen psaet --n 64 --seed 7 -o counts.txt
    sparsemm correct a.mtx b.mtx guess.mtx -o c.mtx
    sparsemm closure graph.txt -o closure.txt
    sparsemm bench --family fully-sparse --m 1000 10000 --csv out.csv

Exit status: 0 on success, 1 when a verification fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import sys

from .domains import DomainError, parse_domain
from .graphs import GraphFormatError

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _delta(text: str):
    if text == "auto":
        return "auto"
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--delta takes an integer or 'auto'") from None
    if v < 1:
        raise argparse.ArgumentTypeError("--delta must be positive")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("--seed must fit in 64 unsigned bits")
    return v


def _common(p: argparse.ArgumentParser, domain=True):
    if domain:
        p.add_argument("--domain", default=None,
                       help="bool, nonneg, int, bigint, gf2 or zmod:<k> (default: from file)")
    p.add_argument("--delta", type=_delta, default="auto")
    p.add_argument("--hash", choices=("det", "rand"), default="det")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--backend", choices=("naive", "strassen"), default="naive")
    p.add_argument("--report", metavar="JSON", default=None)
    p.add_argument("-o", "--output", default=None)


def _opts(a) -> dict:
    return {"delta": a.delta, "hashing": a.hash, "seed": a.seed, "backend": a.backend}


def _domain(a):
    if getattr(a, "domain", None) is None:
        return None
    try:
        return parse_domain(a.domain)
    except (DomainError, ValueError) as e:
        raise InputError(str(e)) from None


def _read(path, dom):
    from .mmio import MatrixMarketError, read_matrix_market

    try:
        return read_matrix_market(path, dom)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except (MatrixMarketError, DomainError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _dump_report(a, rep):
    if a.report and rep is not None:
        with open(a.report, "w") as fh:
            fh.write(rep.to_json(full=True))


def _out(a):
    return open(a.output, "w") if a.output else sys.stdout


# ---------------------------------------------------------------- commands


def cmd_multiply(a) -> int:
    from .input_sparse import multiply_sparse
    from .mmio import write_matrix_market
    from .report import Report

    dom = _domain(a)
    A, B = _read(a.a, dom), _read(a.b, dom)
    if A.domain != B.domain:
        raise InputError(f"domains differ: {A.domain.name} vs {B.domain.name}; pass --domain")
    if A.shape[1] != B.shape[0]:
        raise InputError(f"inner dimensions differ: {A.shape} x {B.shape}")
    rep = Report() if a.report else None
    C = multiply_sparse(A, B, report=rep, **_opts(a))
    write_matrix_market(C, a.output if a.output else sys.stdout)
    _dump_report(a, rep)
    return EXIT_OK


def cmd_verify(a) -> int:
    from .naive import freivalds_verify, naive_multiply

    dom = _domain(a)
    A, B, C = _read(a.a, dom), _read(a.b, dom), _read(a.c, dom)
    if not (A.domain == B.domain == C.domain):
        raise InputError("domains differ; pass --domain")
    if A.shape[1] != B.shape[0] or C.shape != (A.shape[0], B.shape[1]):
        raise InputError("shapes do not compose")
    if a.method == "exact" or A.domain.kind == "bool" or A.domain.kind == "ring":
        ok = naive_multiply(A, B) == C
    else:
        ok = freivalds_verify(A, B, C, trials=a.trials, seed=a.seed)
    print("OK" if ok else "MISMATCH")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_exponent(a) -> int:
    from .exponent import (OmegaTable, SigmaInfeasible, default_table, parse_grid,
                           sigma_numeric, sigma_sweep, sweep_certificates, sweep_to_csv)
    from .exponent.sigma import SweepRow

    try:
        grid = parse_grid(a.sweep) if a.sweep else [a.r]
        table = OmegaTable.from_csv(a.table) if a.table else default_table()
    except OSError as e:
        raise InputError(f"{a.table}: {e.strerror}") from None
    except ValueError as e:
        raise InputError(str(e)) from None
    try:
        if a.convention != "definition" and a.method == "lp":
            rows = [SweepRow(float(r), sigma_numeric(r, table, a.tol, a.convention), "lp")
                    for r in grid]
        else:
            rows = sigma_sweep(grid, table, a.method, a.tol)
    except SigmaInfeasible as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_VERIFY
    except ValueError as e:
        raise InputError(str(e)) from None
    out = _out(a)
    try:
        sweep_to_csv(rows, out)
    finally:
        if out is not sys.stdout:
            out.close()
    if a.certificates:
        with open(a.certificates, "w") as fh:
            fh.write(sweep_certificates(grid, table))
    return EXIT_OK


def cmd_triangle(a) -> int:
    from .apps import (ae_triangle_brute, ae_triangle_via_mm, count_triangles_brute,
                       count_triangles_via_mm)
    from .graphs import psaet_tripartite, random_tripartite, read_tripartite

    if a.graph:
        try:
            G = read_tripartite(a.graph)
        except OSError as e:
            raise InputError(f"{a.graph}: {e.strerror}") from None
    elif a.gen == "random":
        G = random_tripartite(a.n, a.n, a.n, a.density, seed=a.seed)
    elif a.gen == "psaet":
        G = psaet_tripartite(a.n, seed=a.seed)
    else:
        raise InputError("give a graph file or --gen")
    opts = _opts(a)
    if a.mode == "ae":
        edges = sorted(ae_triangle_via_mm(G, **opts))
        lines = [f"{u} {v}" for u, v in edges]
        ok = not a.check or set(edges) == ae_triangle_brute(G)
    else:
        counts = count_triangles_via_mm(G, **opts)
        lines = [f"{u} {v} {c}" for (u, v), c in sorted(counts.items())]
        ok = not a.check or counts == count_triangles_brute(G)
    out = _out(a)
    try:
        out.write("\n".join(lines) + ("\n" if lines else ""))
    finally:
        if out is not sys.stdout:
            out.close()
    if a.check:
        print("OK" if ok else "MISMATCH", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_correct(a) -> int:
    from .apps import correct_product
    from .mmio import write_matrix_market
    from .report import Report

    dom = _domain(a)
    A, B, Ct = _read(a.a, dom), _read(a.b, dom), _read(a.guess, dom)
    if not (A.domain == B.domain == Ct.domain):
        raise InputError("domains differ; pass --domain")
    rep = Report() if a.report else None
    try:
        C, E = correct_product(A, B, Ct, return_error=True, report=rep, **_opts(a))
    except ValueError as e:
        raise InputError(str(e)) from None
    write_matrix_market(C, a.output if a.output else sys.stdout)
    print(f"corrected {E.nnz} entries", file=sys.stderr)
    _dump_report(a, rep)
    return EXIT_OK


def cmd_closure(a) -> int:
    from .apps import closure_floyd_warshall, transitive_closure
    from .graphs import random_digraph, read_digraph, write_digraph

    if a.graph:
        try:
            G = read_digraph(a.graph)
        except OSError as e:
            raise InputError(f"{a.graph}: {e.strerror}") from None
    else:
        G = random_digraph(a.n, a.density, seed=a.seed)
    T = transitive_closure(G, self_loops=a.self_loops, **_opts(a))
    write_digraph(T, a.output if a.output else sys.stdout)
    if a.check:
        ok = T.arc_set() == closure_floyd_warshall(G, a.self_loops).arc_set()
        print("OK" if ok else "MISMATCH", file=sys.stderr)
        return EXIT_OK if ok else EXIT_VERIFY
    return EXIT_OK


def cmd_bench(a) -> int:
    from .bench import run_bench, rows_to_csv

    rows = run_bench(a.family, a.m, range(a.seed, a.seed + a.seeds), workers=a.workers,
                     csv_path=a.csv, json_path=a.json, delta=a.delta, hashing=a.hash,
                     backend=a.backend)
    if not a.csv:
        sys.stdout.write(rows_to_csv(rows))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sparsemm", description="Output-sensitive sparse products.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("multiply", help="C = AB for Matrix Market inputs")
    m.add_argument("a")
    m.add_argument("b")
    _common(m)
    m.set_defaults(fn=cmd_multiply)

    v = sub.add_parser("verify", help="check C = AB")
    v.add_argument("a")
    v.add_argument("b")
    v.add_argument("c")
    v.add_argument("--domain", default=None)
    v.add_argument("--method", choices=("exact", "freivalds"), default="exact")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--seed", type=_seed, default=0)
    v.set_defaults(fn=cmd_verify)

    e = sub.add_parser("exponent", help="sigma(r) sweep as CSV")
    g = e.add_mutually_exclusive_group(required=True)
    g.add_argument("--sweep", metavar="START:STOP:STEP")
    g.add_argument("--r", type=float)
    e.add_argument("--table", default=None, help="omega table CSV (a,b,c,omega)")
    e.add_argument("--method", default="lp",
                   choices=("lp", "algebraic", "closed-form-omega2", "trivial"))
    e.add_argument("--convention", choices=("definition", "printed"), default="definition")
    e.add_argument("--tol", type=float, default=1e-4)
    e.add_argument("--certificates", metavar="JSON", default=None)
    e.add_argument("-o", "--output", default=None)
    e.set_defaults(fn=cmd_exponent)

    t = sub.add_parser("triangle", help="all-edges triangle / per-edge counts")
    t.add_argument("graph", nargs="?", default=None)
    t.add_argument("--gen", choices=("random", "psaet"), default=None)
    t.add_argument("--n", type=int, default=32)
    t.add_argument("--density", type=float, default=0.2)
    t.add_argument("--mode", choices=("ae", "count"), default="ae")
    t.add_argument("--check", action="store_true", help="compare with brute force")
    _common(t, domain=False)
    t.set_defaults(fn=cmd_triangle)

    c = sub.add_parser("correct", help="repair an almost-correct product")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("guess")
    _common(c)
    c.set_defaults(fn=cmd_correct)

    cl = sub.add_parser("closure", help="transitive closure of a digraph")
    cl.add_argument("graph", nargs="?", default=None)
    cl.add_argument("--n", type=int, default=32)
    cl.add_argument("--density", type=float, default=0.05)
    cl.add_argument("--self-loops", choices=("input", "cycles"), default="input")
    cl.add_argument("--check", action="store_true")
    _common(cl, domain=False)
    cl.set_defaults(fn=cmd_closure)

    b = sub.add_parser("bench", help="seeded instance families")
    b.add_argument("--family", nargs="+", default=["fully-sparse", "skewed", "planted", "rank1"],
                   choices=("fully-sparse", "skewed", "planted", "rank1"))
    b.add_argument("--m", nargs="+", type=int, default=[1000])
    b.add_argument("--seeds", type=int, default=1)
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--csv", default=None)
    b.add_argument("--json", default=None)
    _common(b, domain=False)
    b.set_defaults(fn=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return a.fn(a)
    except (InputError, GraphFormatError) as e:
        print(f"sparsemm {a.command}: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
