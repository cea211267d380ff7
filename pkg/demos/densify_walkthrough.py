"""How a sparse product is assembled.

Fold the rows of A in pairs, multiply the half-height matrix, lift its
support back up to get candidate pairs, and read the true values off small
products against hashed, column-compressed copies of B.
"""

import numpy as np

from sparsemm import NONNEG, Report, SparseMatrix, multiply_sparse, naive_multiply
from sparsemm.densify import compress
from sparsemm.generators import random_pair
from sparsemm.isolation import build_deterministic_family, isolated_pairs

A, B = random_pair(16, 12, 20, 0.12, NONNEG, seed=3)
C = naive_multiply(A, B)
print(f"A {A.shape} nnz={A.nnz}, B {B.shape} nnz={B.nnz}, AB nnz={C.nnz}")

# one level of folding: row i of the folded matrix is row 2i + row 2i+1
Af = SparseMatrix.from_arrays((8, 12), A.rows // 2, A.cols, A.values, NONNEG)
Cf = naive_multiply(Af, B)
cand = {(2 * i + t, j) for i, j in Cf.support().pairs() for t in (0, 1)}
print(f"folded product nnz={Cf.nnz}, candidates={len(cand)}, "
      f"true support inside: {C.support().pairs() <= cand}")

# isolate the true support with a few explicit hash functions
S = C.support()
fam = build_deterministic_family(S)
print(f"{len(fam)} hash functions into {fam.buckets} buckets isolate all {len(S)} pairs")
for t, h in enumerate(fam):
    iso = isolated_pairs(S, h)
    Bc = compress(B, h, fam.buckets)
    print(f"  h{t}: compressed B {Bc.shape}, isolates {len(iso)} pairs")

rep = Report()
out = multiply_sparse(A, B, report=rep)
print("end to end equals oracle:", out == C)
for k, v in rep.summary().items():
    print(f"  {k:22s} {v}")
