"""Parity-check kits for the two components of the coset concatenation.

For a prime q and r >= 1 this module builds:

  h_hamming   r x n with n = (q**r - 1)//(q - 1); the columns are the
              normalized nonzero vectors of GF(q)**r (first nonzero
              coordinate equal to 1), sorted by position index.  Its kernel
              is the q-ary Hamming code of length n.
  h_columns   r x q**r; every vector of GF(q)**r appears once as a column,
              at its own position index.
  h_extended  (r+1) x q**r; an all-ones row stacked on top of h_columns.
              Its kernel is the second component code: words with zero
              coordinate sum and zero weighted syndrome.

Positions of length-r vectors are indexed little-endian:
idx(a) = sum a_i * q**i, so concatenation satisfies
idx(a|b) = idx(a) + q**len(a) * idx(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .linalg import DTYPE, DimensionMismatch, FieldContext, mat_vec

__all__ = [
    "MAX_POINTS",
    "HammingPair",
    "all_vectors",
    "build_hamming_pair",
    "extended_coset_leader",
    "field_powers",
    "hamming_coset_rep",
    "index_to_vec",
    "stacked_parity",
    "syndrome",
    "vec_to_index",
]

MAX_POINTS = 1 << 20  # largest q**r this module will materialize


def field_powers(q: int, r: int) -> np.ndarray:
    return q ** np.arange(r, dtype=DTYPE)


def vec_to_index(q: int, a) -> int:
    """Little-endian position index of a vector in GF(q)**r."""
    aa = np.asarray(a, dtype=DTYPE) % q
    return int(aa @ field_powers(q, aa.shape[0]))


def index_to_vec(q: int, r: int, idx: int) -> np.ndarray:
    if not 0 <= idx < q**r:
        raise ValueError(f"index {idx} out of range for q={q}, r={r}")
    return (idx // field_powers(q, r)) % q


def all_vectors(q: int, r: int) -> np.ndarray:
    """All q**r vectors as rows, row i being the vector with index i."""
    if q**r > MAX_POINTS:
        raise ValueError(f"q**r = {q**r} exceeds the materialization guard {MAX_POINTS}")
    idx = np.arange(q**r, dtype=DTYPE)
    return (idx[:, None] // field_powers(q, r)[None, :]) % q


@dataclass(frozen=True)
class HammingPair:
    """The three parity-check matrices for one concatenation level."""

    ctx: FieldContext
    r: int
    h_hamming: np.ndarray
    h_columns: np.ndarray
    h_extended: np.ndarray

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def n(self) -> int:
        """Length of the Hamming component, (q**r - 1)//(q - 1)."""
        return self.h_hamming.shape[1]

    @property
    def points(self) -> int:
        """Length of the extended component, q**r."""
        return self.h_columns.shape[1]

    @cached_property
    def hamming_col_index(self) -> np.ndarray:
        """Position index of each h_hamming column; strictly increasing."""
        return field_powers(self.q, self.r) @ self.h_hamming


def build_hamming_pair(ctx: FieldContext, r: int) -> HammingPair:
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    q = ctx.q
    if q**r > MAX_POINTS:
        raise ValueError(f"q**r = {q**r} exceeds the construction guard {MAX_POINTS}")
    vecs = all_vectors(q, r)
    nonzero = vecs.any(axis=1)
    first = vecs[np.arange(len(vecs)), np.argmax(vecs != 0, axis=1)]
    normalized = nonzero & (first == 1)
    h_hamming = vecs[normalized].T.copy()
    h_columns = vecs.T.copy()
    h_extended = np.vstack([np.ones(q**r, dtype=DTYPE), h_columns])
    return HammingPair(ctx, r, h_hamming, h_columns, h_extended)


def stacked_parity(hp: HammingPair) -> np.ndarray:
    """(r+1) x (n + q**r) parity check whose kernel is the full-length
    Hamming code: top row (0..0|1..1), bottom block (h_hamming|h_columns)."""
    top = np.concatenate(
        [np.zeros(hp.n, dtype=DTYPE), np.ones(hp.points, dtype=DTYPE)]
    )
    bottom = np.hstack([hp.h_hamming, hp.h_columns])
    return np.vstack([top, bottom])


def syndrome(ctx: FieldContext, h, x) -> np.ndarray:
    return mat_vec(ctx, h, x)


def hamming_coset_rep(hp: HammingPair, a) -> np.ndarray:
    """Canonical weight-<=1 word of length n with Hamming syndrome a.

    For a != 0 this is lam * e_j where lam is the first nonzero coordinate
    of a and j is the h_hamming column equal to a / lam; for a = 0 it is 0.
    """
    aa = hp.ctx.vector(a)
    if aa.shape[0] != hp.r:
        raise DimensionMismatch(f"syndrome must have length {hp.r}")
    x = np.zeros(hp.n, dtype=DTYPE)
    nz = np.flatnonzero(aa)
    if nz.size == 0:
        return x
    lam = int(aa[nz[0]])
    target = vec_to_index(hp.q, (aa * hp.ctx.inv(lam)) % hp.q)
    j = int(np.searchsorted(hp.hamming_col_index, target))
    x[j] = lam
    return x


def extended_coset_leader(hp: HammingPair, a) -> np.ndarray:
    """The word e_0 - e_idx(a) of length q**r (zero word for a = 0).

    Its coordinate sum is 0 and its h_extended syndrome is -(0|a).
    """
    aa = hp.ctx.vector(a)
    if aa.shape[0] != hp.r:
        raise DimensionMismatch(f"label must have length {hp.r}")
    y = np.zeros(hp.points, dtype=DTYPE)
    k = vec_to_index(hp.q, aa)
    if k != 0:
        y[0] = 1
        y[k] = hp.q - 1
    return y
