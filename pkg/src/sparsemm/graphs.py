"""Tripartite graphs and digraphs: containers, generators and edge-list files.

Tripartite edge lists use one line per edge, ``part1 part2 u v`` with parts
named X, Y, Z and 0-based node ids, e.g. ``X Z 3 5``.  Digraphs use ``u v``.
An optional first line ``# parts nx ny nz`` (or ``# nodes n``) fixes sizes
that isolated nodes would otherwise hide.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .domains import BOOL
from .matrix import SparseMatrix


class GraphFormatError(ValueError):
    pass


def _pairs(a) -> np.ndarray:
    arr = np.asarray(a, dtype=np.int64).reshape(-1, 2)
    if len(arr) == 0:
        return arr
    arr = np.unique(arr, axis=0)
    return arr


@dataclass
class TripartiteGraph:
    nx: int
    ny: int
    nz: int
    exy: np.ndarray
    eyz: np.ndarray
    exz: np.ndarray

    def __post_init__(self):
        self.exy, self.eyz, self.exz = _pairs(self.exy), _pairs(self.eyz), _pairs(self.exz)
        for e, (p, q) in ((self.exy, (self.nx, self.ny)), (self.eyz, (self.ny, self.nz)),
                          (self.exz, (self.nx, self.nz))):
            if len(e) and (e.min() < 0 or e[:, 0].max() >= p or e[:, 1].max() >= q):
                raise GraphFormatError("edge endpoint outside its part")

    @property
    def m(self) -> int:
        return len(self.exy) + len(self.eyz) + len(self.exz)

    def matrix(self, part: str) -> SparseMatrix:
        e, shape = {"xy": (self.exy, (self.nx, self.ny)), "yz": (self.eyz, (self.ny, self.nz)),
                    "xz": (self.exz, (self.nx, self.nz))}[part]
        return SparseMatrix.from_arrays(shape, e[:, 0], e[:, 1], np.ones(len(e), np.int64), BOOL)


@dataclass
class Digraph:
    n: int
    arcs: np.ndarray

    def __post_init__(self):
        self.arcs = _pairs(self.arcs)
        if len(self.arcs) and (self.arcs.min() < 0 or self.arcs.max() >= self.n):
            raise GraphFormatError("arc endpoint outside [0, n)")

    def adjacency(self) -> SparseMatrix:
        a = self.arcs
        return SparseMatrix.from_arrays((self.n, self.n), a[:, 0], a[:, 1],
                                        np.ones(len(a), np.int64), BOOL)

    def arc_set(self) -> set:
        return set(map(tuple, self.arcs.tolist()))


# ---------------------------------------------------------------- generators


def _random_pairs(rng, p, q, density):
    if p == 0 or q == 0 or density <= 0:
        return np.zeros((0, 2), np.int64)
    mask = rng.random((p, q)) < density
    return np.argwhere(mask)


def random_tripartite(nx, ny, nz, density=0.2, seed=None) -> TripartiteGraph:
    rng = np.random.default_rng(seed)
    return TripartiteGraph(nx, ny, nz, _random_pairs(rng, nx, ny, density),
                           _random_pairs(rng, ny, nz, density), _random_pairs(rng, nx, nz, density))


def psaet_tripartite(n: int, mu: float = 0.5286, xy_density: float = 0.5,
                     seed=None) -> TripartiteGraph:
    """Unbalanced shape: |X| = ceil(n^mu), |Y| = |Z| = n, about n^(1+mu) Y-Z
    edges, all X-Z edges present, X-Y edges at ``xy_density``."""
    rng = np.random.default_rng(seed)
    nx = max(1, math.ceil(n ** mu))
    target = min(n * n, round(n ** (1 + mu)))
    flat = rng.choice(n * n, size=target, replace=False)
    eyz = np.stack([flat // n, flat % n], axis=1)
    exz = np.argwhere(np.ones((nx, n), dtype=bool))
    return TripartiteGraph(nx, n, n, _random_pairs(rng, nx, n, xy_density), eyz, exz)


def random_digraph(n, density=0.05, seed=None, self_loops=False) -> Digraph:
    rng = np.random.default_rng(seed)
    arcs = _random_pairs(rng, n, n, density)
    if not self_loops and len(arcs):
        arcs = arcs[arcs[:, 0] != arcs[:, 1]]
    return Digraph(n, arcs)


# ---------------------------------------------------------------- files

_PART_INDEX = {"X": 0, "Y": 1, "Z": 2}


def write_tripartite(G: TripartiteGraph, dst) -> None:
    lines = [f"# parts {G.nx} {G.ny} {G.nz}"]
    for (p, q), e in ((("X", "Y"), G.exy), (("Y", "Z"), G.eyz), (("X", "Z"), G.exz)):
        lines.extend(f"{p} {q} {u} {v}" for u, v in e.tolist())
    _write(dst, "\n".join(lines) + "\n")


def read_tripartite(src) -> TripartiteGraph:
    sizes = None
    edges = {("X", "Y"): [], ("Y", "Z"): [], ("X", "Z"): []}
    for n, ln in enumerate(_read(src).splitlines(), start=1):
        t = ln.split()
        if not t:
            continue
        if t[0] == "#":
            if len(t) == 5 and t[1] == "parts":
                sizes = tuple(int(v) for v in t[2:])
            continue
        if len(t) != 4:
            raise GraphFormatError(f"line {n}: expected 'part1 part2 u v'")
        p, q = t[0].upper(), t[1].upper()
        if p not in _PART_INDEX or q not in _PART_INDEX or p == q:
            raise GraphFormatError(f"line {n}: bad parts {t[0]} {t[1]}")
        try:
            u, v = int(t[2]), int(t[3])
        except ValueError:
            raise GraphFormatError(f"line {n}: node ids must be integers") from None
        if _PART_INDEX[p] > _PART_INDEX[q]:
            p, q, u, v = q, p, v, u
        edges[(p, q)].append((u, v))
    if sizes is None:
        mx = [0, 0, 0]
        for (p, q), lst in edges.items():
            for u, v in lst:
                mx[_PART_INDEX[p]] = max(mx[_PART_INDEX[p]], u + 1)
                mx[_PART_INDEX[q]] = max(mx[_PART_INDEX[q]], v + 1)
        sizes = tuple(mx)
    return TripartiteGraph(*sizes, np.array(edges[("X", "Y")], np.int64).reshape(-1, 2),
                           np.array(edges[("Y", "Z")], np.int64).reshape(-1, 2),
                           np.array(edges[("X", "Z")], np.int64).reshape(-1, 2))


def write_digraph(G: Digraph, dst) -> None:
    lines = [f"# nodes {G.n}"] + [f"{u} {v}" for u, v in G.arcs.tolist()]
    _write(dst, "\n".join(lines) + "\n")


def read_digraph(src) -> Digraph:
    n_decl = None
    arcs = []
    for k, ln in enumerate(_read(src).splitlines(), start=1):
        t = ln.split()
        if not t:
            continue
        if t[0] == "#":
            if len(t) == 3 and t[1] == "nodes":
                n_decl = int(t[2])
            continue
        if len(t) != 2:
            raise GraphFormatError(f"line {k}: expected 'u v'")
        try:
            arcs.append((int(t[0]), int(t[1])))
        except ValueError:
            raise GraphFormatError(f"line {k}: node ids must be integers") from None
    n = n_decl if n_decl is not None else (max((max(a) for a in arcs), default=-1) + 1)
    return Digraph(n, np.array(arcs, np.int64).reshape(-1, 2))


def _read(src) -> str:
    if isinstance(src, (str, os.PathLike)):
        with open(src) as fh:
            return fh.read()
    return src.read()


def _write(dst, text):
    if isinstance(dst, (str, os.PathLike)):
        with open(dst, "w") as fh:
            fh.write(text)
    else:
        dst.write(text)
