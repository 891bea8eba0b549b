"""Dense exact linear algebra over prime fields GF(q), q < 256.

All matrices and vectors are plain numpy integer arrays whose entries are
reduced to {0, ..., q-1}; a FieldContext carries q and builds validated
arrays. Functions are pure: inputs are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

DTYPE = np.int64

__all__ = [
    "DTYPE",
    "DimensionMismatch",
    "FieldContext",
    "ParseError",
    "is_invertible",
    "is_prime",
    "mat_inv",
    "mat_mul",
    "mat_vec",
    "nullspace_basis",
    "rank",
    "read_matrix",
    "rref",
    "solve",
    "write_matrix",
]


class DimensionMismatch(ValueError):
    """Shapes of the operands do not conform."""


class ParseError(ValueError):
    """A text file does not match the expected format."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def _inverse_table(q: int) -> np.ndarray:
    table = np.zeros(q, dtype=DTYPE)
    for x in range(1, q):
        table[x] = pow(x, q - 2, q)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class FieldContext:
    """The prime field GF(q), elements represented as integers 0..q-1."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, int) or not 2 <= self.q < 256:
            raise ValueError(f"modulus must be an integer in [2, 255], got {self.q!r}")
        if not is_prime(self.q):
            raise ValueError(f"modulus must be prime, got {self.q}")

    # -- scalar arithmetic --------------------------------------------

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.q

    def sub(self, x: int, y: int) -> int:
        return (x - y) % self.q

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.q

    def neg(self, x: int) -> int:
        return (-x) % self.q

    def inv(self, x: int) -> int:
        if x % self.q == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return pow(x, self.q - 2, self.q)

    # -- array construction -------------------------------------------

    def reduce(self, values) -> np.ndarray:
        """Reduce arbitrary integer data mod q; negative literals wrap."""
        return np.asarray(values, dtype=DTYPE) % self.q

    def vector(self, entries) -> np.ndarray:
        v = self.reduce(entries)
        if v.ndim != 1:
            raise DimensionMismatch(f"expected a vector, got shape {v.shape}")
        return v

    def matrix(self, rows) -> np.ndarray:
        m = self.reduce(rows)
        if m.ndim != 2:
            raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
        return m

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=DTYPE)

    def zeros(self, *shape: int) -> np.ndarray:
        return np.zeros(shape, dtype=DTYPE)


def _eliminate(a: np.ndarray, q: int, reduced: bool) -> list[int]:
    """In-place Gaussian elimination, pivoting on the first nonzero entry of
    each column.  Returns the pivot columns; afterwards rows 0..len(pivots)-1
    hold the echelon rows and every later row is zero.  With reduced=True the
    result is the reduced row echelon form with unit pivots.
    """
    m, n = a.shape
    inv_table = _inverse_table(q)
    row = 0
    pivots: list[int] = []
    for col in range(n):
        if row == m:
            break
        nz = np.flatnonzero(a[row:, col])
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            a[[row, p]] = a[[p, row]]
        piv = int(a[row, col])
        if piv != 1:
            a[row] = a[row] * inv_table[piv] % q
        if reduced:
            coeffs = a[:, col].copy()
            coeffs[row] = 0
            targets = np.flatnonzero(coeffs)
        else:
            targets = row + 1 + np.flatnonzero(a[row + 1 :, col])
        if targets.size:
            a[targets] = (a[targets] - np.outer(a[targets, col], a[row])) % q
        pivots.append(col)
        row += 1
    return pivots


def rank(ctx: FieldContext, m) -> int:
    work = ctx.matrix(m)
    return len(_eliminate(work, ctx.q, reduced=False))


def rref(ctx: FieldContext, m) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and its pivot columns."""
    work = ctx.matrix(m)
    pivots = _eliminate(work, ctx.q, reduced=True)
    return work, tuple(pivots)


def solve(ctx: FieldContext, m, b) -> Optional[np.ndarray]:
    """One solution x of m x = b, or None if the system is inconsistent.

    Deterministic: free variables are set to 0 in reduced echelon order.
    """
    mm = ctx.matrix(m)
    bb = ctx.vector(b)
    if bb.shape[0] != mm.shape[0]:
        raise DimensionMismatch(f"matrix has {mm.shape[0]} rows, vector has {bb.shape[0]}")
    aug = np.hstack([mm, bb[:, None]])
    pivots = _eliminate(aug, ctx.q, reduced=True)
    n = mm.shape[1]
    if pivots and pivots[-1] == n:
        return None  # pivot in the constant column
    x = np.zeros(n, dtype=DTYPE)
    for i, c in enumerate(pivots):
        x[c] = aug[i, n]
    return x


def nullspace_basis(ctx: FieldContext, m) -> np.ndarray:
    """Basis of the right kernel of m, one row per free column.

    Rows are ordered by free column index; row k has a 1 at its free column
    and zeros at every other free column, so the ordering is reproducible.
    """
    red, pivots = rref(ctx, m)
    n = red.shape[1]
    pivset = set(pivots)
    free = [c for c in range(n) if c not in pivset]
    basis = np.zeros((len(free), n), dtype=DTYPE)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-red[i, f]) % ctx.q
    return basis


def mat_mul(ctx: FieldContext, a, b) -> np.ndarray:
    aa = ctx.matrix(a)
    bb = ctx.matrix(b)
    if aa.shape[1] != bb.shape[0]:
        raise DimensionMismatch(f"cannot multiply {aa.shape} by {bb.shape}")
    return aa @ bb % ctx.q


def mat_vec(ctx: FieldContext, m, v) -> np.ndarray:
    mm = ctx.matrix(m)
    vv = ctx.vector(v)
    if mm.shape[1] != vv.shape[0]:
        raise DimensionMismatch(f"cannot apply {mm.shape} to a vector of length {vv.shape[0]}")
    return mm @ vv % ctx.q


def mat_inv(ctx: FieldContext, m) -> Optional[np.ndarray]:
    """Inverse matrix, or None if m is singular."""
    mm = ctx.matrix(m)
    n = mm.shape[0]
    if mm.shape[1] != n:
        raise DimensionMismatch(f"matrix must be square, got {mm.shape}")
    aug = np.hstack([mm, np.eye(n, dtype=DTYPE)])
    pivots = _eliminate(aug, ctx.q, reduced=True)
    if list(pivots) != list(range(n)):
        return None
    return aug[:, n:].copy()


def is_invertible(ctx: FieldContext, m) -> bool:
    return mat_inv(ctx, m) is not None


# -- matrix text format ------------------------------------------------
#
# line 1: "q rows cols"; then one matrix row per line, space-separated.


def write_matrix(path, ctx: FieldContext, m) -> None:
    mm = ctx.matrix(m)
    rows, cols = mm.shape
    lines = [f"{ctx.q} {rows} {cols}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in mm)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix(path) -> tuple[FieldContext, np.ndarray]:
    with open(path) as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise ParseError("empty file", 1)
    head = raw[0].split()
    if len(head) != 3:
        raise ParseError("expected header 'q rows cols'", 1)
    try:
        q, rows, cols = (int(t) for t in head)
    except ValueError:
        raise ParseError("header fields must be integers", 1) from None
    try:
        ctx = FieldContext(q)
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None
    if len(raw) < 1 + rows:
        raise ParseError(f"expected {rows} matrix rows", len(raw) + 1)
    data = np.zeros((rows, cols), dtype=DTYPE)
    for i in range(rows):
        toks = raw[1 + i].split()
        if len(toks) != cols:
            raise ParseError(f"expected {cols} entries", 2 + i)
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise ParseError("entries must be integers", 2 + i) from None
        if any(not 0 <= v < q for v in vals):
            raise ParseError(f"entries must lie in [0, {q - 1}]", 2 + i)
        data[i] = vals
    return ctx, data
