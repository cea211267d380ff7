"""Scalar domains.

A domain fixes how matrix entries are stored and combined.  Everything that
fits in a machine word (bool, nonneg, int, zmod) is stored as int64 with
checked arithmetic: before an operation runs we bound the magnitude of its
result from the operand maxima and refuse to proceed if the bound leaves the
int64 range.  Unbounded integers and user supplied rings live in object
arrays.

Booleans are stored as 0/1.  Products over the boolean domain are computed
as counts over the nonnegative integers and thresholded at the end, so the
``compute_domain`` of ``bool`` is ``nonneg``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

INT64_MAX = np.iinfo(np.int64).max
# float64 represents every integer below this exactly
FLOAT_EXACT = 1 << 53


class DomainError(ValueError):
    """An entry does not belong to the declared domain."""


class IntegerOverflowError(ArithmeticError):
    """A checked 64-bit operation could leave the int64 range."""


@dataclass(frozen=True, eq=False)
class Ring:
    """An abstract ring given by its operations.

    Only ``zero``, ``add`` and ``mul`` are required.  ``neg`` enables the
    error-correction reduction.  Set ``commutative=False`` for rings such as
    matrix rings so that no routine swaps operand order.
    """

    name: str
    zero: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    is_zero: Callable[[Any], bool] | None = None
    neg: Callable[[Any], Any] | None = None
    commutative: bool = True
    contains: Callable[[Any], bool] | None = None
    one: Any = None

    def zero_test(self, v) -> bool:
        if self.is_zero is not None:
            return bool(self.is_zero(v))
        return v == self.zero


def obj_array(values) -> np.ndarray:
    """1-D object array; safe for tuple-valued ring elements."""
    values = list(values)
    arr = np.empty(len(values), dtype=object)
    for idx, v in enumerate(values):
        arr[idx] = v
    return arr


def _absmax(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


class ScalarDomain:
    """Entry semantics for a matrix.

    kind is one of ``bool``, ``nonneg``, ``int``, ``bigint``, ``zmod``,
    ``ring``.
    """

    def __init__(self, kind: str, modulus: int | None = None, ring: Ring | None = None):
        if kind not in ("bool", "nonneg", "int", "bigint", "zmod", "ring"):
            raise ValueError(f"unknown domain kind {kind!r}")
        if kind == "zmod":
            if modulus is None or int(modulus) < 2:
                raise ValueError("zmod needs a modulus k >= 2")
            if int(modulus) >= 1 << 31:
                raise ValueError("zmod modulus must be below 2**31")
            modulus = int(modulus)
        elif modulus is not None:
            raise ValueError("only zmod takes a modulus")
        if kind == "ring" and ring is None:
            raise ValueError("ring domain needs a Ring")
        self.kind = kind
        self.modulus = modulus
        self.ring = ring
        self.dtype = np.dtype(object) if kind in ("bigint", "ring") else np.dtype(np.int64)
        if kind == "ring":
            self._uadd = np.frompyfunc(ring.add, 2, 1)
            self._umul = np.frompyfunc(ring.mul, 2, 1)
            self._uzero = np.frompyfunc(ring.zero_test, 1, 1)
            self._uneg = np.frompyfunc(ring.neg, 1, 1) if ring.neg else None

    # ------------------------------------------------------------------ naming
    @property
    def name(self) -> str:
        if self.kind == "zmod":
            return "gf2" if self.modulus == 2 else f"zmod:{self.modulus}"
        if self.kind == "ring":
            return f"ring:{self.ring.name}"
        return self.kind

    def __repr__(self):
        return f"ScalarDomain({self.name})"

    def __eq__(self, other):
        if not isinstance(other, ScalarDomain):
            return NotImplemented
        return (self.kind, self.modulus, self.ring) == (other.kind, other.modulus, other.ring)

    def __hash__(self):
        return hash((self.kind, self.modulus, id(self.ring)))

    @property
    def is_word(self) -> bool:
        return self.dtype != np.dtype(object)

    @property
    def commutative(self) -> bool:
        return self.ring.commutative if self.kind == "ring" else True

    @property
    def has_negation(self) -> bool:
        if self.kind == "ring":
            return self.ring.neg is not None
        return self.kind in ("int", "bigint", "zmod")

    @property
    def compute_domain(self) -> "ScalarDomain":
        return NONNEG if self.kind == "bool" else self

    @property
    def zero(self):
        return self.ring.zero if self.kind == "ring" else 0

    # ------------------------------------------------------------- validation
    def asarray(self, values) -> np.ndarray:
        """Convert ``values`` to this domain's storage, validating entries."""
        if self.kind == "ring":
            arr = obj_array(values)
            if self.ring.contains is not None:
                for v in arr:
                    if not self.ring.contains(v):
                        raise DomainError(f"{v!r} is not in ring {self.ring.name}")
            return arr
        if self.kind == "bigint":
            arr = np.empty(len(values), dtype=object)
            for idx, v in enumerate(values):
                if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
                    raise DomainError(f"bigint entry {v!r} is not an integer")
                arr[idx] = int(v)
            return arr
        raw = np.asarray(values)
        if raw.size and raw.dtype == object:
            for v in raw:
                if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                    raise DomainError(f"entry {v!r} is not an integer")
                if not -INT64_MAX - 1 <= int(v) <= INT64_MAX:
                    raise IntegerOverflowError(f"entry {v} does not fit in int64")
        elif raw.size and raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
                raise DomainError("non-integer entries")
        elif raw.size and raw.dtype.kind not in "iub":
            raise DomainError(f"unsupported entry dtype {raw.dtype}")
        arr = raw.astype(np.int64).reshape(-1)
        self.validate(arr)
        return arr

    def validate(self, arr: np.ndarray) -> None:
        if arr.size == 0 or self.kind in ("int", "bigint", "ring"):
            return
        lo, hi = int(arr.min()), int(arr.max())
        if self.kind == "bool" and (lo < 0 or hi > 1):
            raise DomainError("boolean entries must be 0 or 1")
        if self.kind == "nonneg" and lo < 0:
            raise DomainError("negative entry in nonneg domain")
        if self.kind == "zmod" and (lo < 0 or hi >= self.modulus):
            raise DomainError(f"entries must lie in [0, {self.modulus})")

    # -------------------------------------------------------------- vector ops
    def _check(self, bound: int, what: str) -> None:
        if bound > INT64_MAX:
            raise IntegerOverflowError(f"{what} may overflow int64 (bound {bound})")

    def _reduce(self, a: np.ndarray) -> np.ndarray:
        if self.kind == "zmod":
            return np.mod(a, self.modulus)
        return a

    def zero_mask(self, a: np.ndarray) -> np.ndarray:
        if self.kind == "ring":
            return self._uzero(a).astype(bool) if a.size else np.zeros(0, bool)
        if self.kind == "bigint":
            return np.array([v == 0 for v in a], dtype=bool)
        return a == 0

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == "ring":
            return self._uadd(a, b)
        if self.kind == "bigint":
            return a + b
        self._check(_absmax(a) + _absmax(b), "addition")
        return self._reduce(a + b)

    def neg(self, a: np.ndarray) -> np.ndarray:
        if self.kind == "ring":
            if self._uneg is None:
                raise TypeError(f"ring {self.ring.name} has no negation")
            return self._uneg(a)
        if self.kind == "zmod":
            return np.mod(-a, self.modulus)
        if self.kind in ("bool", "nonneg"):
            raise TypeError(f"{self.name} has no negation")
        return -a

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.kind == "ring":
            return self._umul(a, b)
        if self.kind == "bigint":
            return a * b
        self._check(_absmax(a) * _absmax(b), "multiplication")
        return self._reduce(a * b)

    def scale(self, a: np.ndarray, c: int) -> np.ndarray:
        """Multiply by an integer constant."""
        if self.kind == "ring":
            raise TypeError("integer scaling is not defined for abstract rings")
        if self.kind == "bigint":
            return a * int(c)
        self._check(_absmax(a) * abs(int(c)), "scaling")
        return self._reduce(a * int(c))

    def sum_segments(self, vals: np.ndarray, starts: np.ndarray) -> np.ndarray:
        """Sum consecutive runs of ``vals`` beginning at ``starts``."""
        if len(starts) == 0:
            return vals[:0]
        if self.kind == "ring":
            return self._uadd.reduceat(vals, starts)
        if self.kind == "bigint":
            return np.add.reduceat(vals, starts)
        longest = int(np.max(np.diff(np.append(starts, len(vals)))))
        self._check(_absmax(vals) * longest, "summation")
        return self._reduce(np.add.reduceat(vals, starts))

    def matmul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """Dense product of two 2-D arrays in this domain (schoolbook)."""
        from .kernels import dense_matmul

        return dense_matmul(X, Y, self)

    # -------------------------------------------------------------- scalar ops
    # Used by the reference oracle.  Word domains compute with Python ints so
    # that the oracle never shares overflow behaviour with the fast path.
    def s_add(self, a, b):
        if self.kind == "ring":
            return self.ring.add(a, b)
        r = a + b
        return r % self.modulus if self.kind == "zmod" else r

    def s_mul(self, a, b):
        if self.kind == "ring":
            return self.ring.mul(a, b)
        r = a * b
        return r % self.modulus if self.kind == "zmod" else r

    def s_is_zero(self, a) -> bool:
        if self.kind == "ring":
            return self.ring.zero_test(a)
        return a == 0

    def to_python(self, v):
        return v if self.kind == "ring" else int(v)


BOOL = ScalarDomain("bool")
NONNEG = ScalarDomain("nonneg")
INT = ScalarDomain("int")
BIGINT = ScalarDomain("bigint")
GF2 = ScalarDomain("zmod", modulus=2)


def zmod(k: int) -> ScalarDomain:
    return GF2 if int(k) == 2 else ScalarDomain("zmod", modulus=int(k))


def parse_domain(text: str) -> ScalarDomain:
    """Parse ``bool|nonneg|int|bigint|gf2|zmod:<k>``."""
    t = text.strip().lower()
    if t in ("bool", "nonneg", "int", "bigint"):
        return {"bool": BOOL, "nonneg": NONNEG, "int": INT, "bigint": BIGINT}[t]
    if t == "gf2":
        return GF2
    if t.startswith("zmod:"):
        try:
            k = int(t[5:])
        except ValueError:
            raise ValueError(f"bad modulus in {text!r}") from None
        return zmod(k)
    raise ValueError(f"unknown domain {text!r}")


def zmod_ring(k: int) -> Ring:
    """Z/kZ as an abstract ring (exercises the generic object path)."""
    return Ring(
        name=f"Z/{k}",
        zero=0,
        one=1,
        add=lambda a, b: (a + b) % k,
        mul=lambda a, b: (a * b) % k,
        neg=lambda a: (-a) % k,
        contains=lambda a: isinstance(a, int) and 0 <= a < k,
    )


def mat2_ring(k: int = 2) -> Ring:
    """2x2 matrices over Z/k, a non-commutative ring.  Elements are 4-tuples."""

    def add(a, b):
        return tuple((p + q) % k for p, q in zip(a, b))

    def mul(a, b):
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        return ((a0 * b0 + a1 * b2) % k, (a0 * b1 + a1 * b3) % k,
                (a2 * b0 + a3 * b2) % k, (a2 * b1 + a3 * b3) % k)

    return Ring(
        name=f"M2(Z/{k})",
        zero=(0, 0, 0, 0),
        one=(1, 0, 0, 1),
        add=add,
        mul=mul,
        neg=lambda a: tuple((-p) % k for p in a),
        commutative=False,
        contains=lambda a: isinstance(a, tuple) and len(a) == 4,
    )
