"""Output-sensitive sparse matrix multiplication.

The product AB of sparse matrices is computed with dense work proportional
to the size of the output rather than of the bounding grid: a candidate
support is found by recursing on row-folded copies of A, and the entries on
it are read off products against hashed, column-compressed copies of B.
"""

from .densify import (
    Backend,
    DensifyConfig,
    IsolationFailure,
    densify_integer,
    densify_nonnegative,
    densify_ring,
    recover,
)
from .domains import (
    BIGINT,
    BOOL,
    GF2,
    INT,
    NONNEG,
    DomainError,
    IntegerOverflowError,
    Ring,
    ScalarDomain,
    parse_domain,
    zmod,
)
from .input_sparse import (
    default_delta,
    multiply_input_sparse,
    multiply_light,
    multiply_sparse,
    split_heavy_light,
)
from .isolation import (
    HashFamily,
    IsolationState,
    build_deterministic_family,
    isolated_pairs,
    sample_random_family,
)
from .matrix import DenseMatrix, SparseMatrix, SupportSet
from .mmio import read_matrix_market, write_matrix_market
from .naive import dense_multiply, freivalds_verify, naive_multiply
from .report import Report

__version__ = "0.1.0"
