"""Perfect codes glued from coset pairs of the two component codes.

For a permutation perm of the point indices that fixes 0, the code is

    union over a of  { (x | y) : x in the Hamming coset with syndrome a,
                                 y in the extended coset with label perm(a) }

a length N = n + q**r code over GF(q) that is perfect for every such perm.
Its dimension-like invariants depend on perm only through the distension,
the amount by which the permuted copy of the extended component sticks out
of the original: rank = N - r - 1 + distension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

import numpy as np

from .affine import PermTable, perm_inverse
from .hamming import (
    HammingPair,
    all_vectors,
    field_powers,
    index_to_vec,
    vec_to_index,
)
from .linalg import (
    DTYPE,
    DimensionMismatch,
    FieldContext,
    ParseError,
    _inverse_table,
    nullspace_basis,
    rank,
)

__all__ = [
    "MAX_ENUMERATION",
    "CodeHandle",
    "RankBasis",
    "build_code",
    "canonical_coset_reps",
    "codeword_blocks",
    "codeword_count",
    "contains",
    "distension",
    "distension_oracle",
    "enumerate_codewords",
    "intersection_basis",
    "lex_messages",
    "permuted_check",
    "rank_basis",
    "rank_closed_form",
    "read_codewords",
    "write_codewords",
]

MAX_ENUMERATION = 1 << 28  # enumeration guard on the codeword count


def lex_messages(q: int, k: int) -> np.ndarray:
    """All q**k message tuples as rows, in lexicographic order."""
    return all_vectors(q, k)[:, ::-1]


def permuted_check(hp: HammingPair, perm: PermTable) -> np.ndarray:
    """Parity check of the permuted extended component: column b is the
    h_extended column at perm^(-1)(b), so its kernel is the permuted code."""
    if perm.ctx != hp.ctx or perm.r != hp.r:
        raise DimensionMismatch("permutation does not match the parity kit")
    inv = perm_inverse(perm).images
    return hp.h_extended[:, inv]


def distension(hp: HammingPair, perm: PermTable) -> int:
    """rank of h_extended stacked on its permuted copy, minus (r+1).

    Always in [0, r]; equals 0 exactly when the permuted component is the
    original one.
    """
    stacked = np.vstack([hp.h_extended, permuted_check(hp, perm)])
    return rank(hp.ctx, stacked) - (hp.r + 1)


def intersection_basis(hp: HammingPair, perm: PermTable) -> np.ndarray:
    """Basis (rows) of the intersection of the extended component with its
    permuted copy, found by cutting the kernel of h_extended with the
    permuted check."""
    dbasis = nullspace_basis(hp.ctx, hp.h_extended)
    moved = permuted_check(hp, perm)
    coeff = nullspace_basis(hp.ctx, moved @ dbasis.T % hp.q)
    return coeff @ dbasis % hp.q


def distension_oracle(hp: HammingPair, perm: PermTable) -> int:
    """Distension straight from the definition: dim of the extended
    component minus dim of its intersection with the permuted copy.
    Independent of the stacked-rank route in distension()."""
    dbasis = nullspace_basis(hp.ctx, hp.h_extended)
    return dbasis.shape[0] - intersection_basis(hp, perm).shape[0]


def canonical_coset_reps(hp: HammingPair) -> np.ndarray:
    """Row a is the canonical weight-<=1 Hamming coset representative with
    syndrome index_to_vec(a); row 0 is the zero word."""
    q = hp.q
    size = hp.points
    vecs = all_vectors(q, hp.r)
    fnz = np.argmax(vecs != 0, axis=1)
    lam = vecs[np.arange(size), fnz]
    inv_lam = _inverse_table(q)[lam]
    scaled = vecs * inv_lam[:, None] % q
    target_idx = scaled @ field_powers(q, hp.r)
    cols = np.searchsorted(hp.hamming_col_index, target_idx)
    reps = np.zeros((size, hp.n), dtype=DTYPE)
    nz = np.flatnonzero(lam)
    reps[nz, cols[nz]] = lam[nz]
    return reps


@dataclass(frozen=True)
class CodeHandle:
    """A constructed code: parity kit, gluing permutation, and coset
    representatives (canonical unless overridden; the word set does not
    depend on the choice)."""

    hp: HammingPair
    perm: PermTable
    reps: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.perm.ctx != self.hp.ctx or self.perm.r != self.hp.r:
            raise DimensionMismatch("permutation does not match the parity kit")
        if self.reps is not None:
            reps = self.hp.ctx.matrix(self.reps)
            object.__setattr__(self, "reps", reps)
            if reps.shape != (self.hp.points, self.hp.n):
                raise DimensionMismatch(
                    f"representative table must be {(self.hp.points, self.hp.n)}"
                )
            syndromes = reps @ self.hp.h_hamming.T % self.q
            if not np.array_equal(syndromes, all_vectors(self.q, self.hp.r)):
                raise ValueError("row a of the representative table must have syndrome a")

    @property
    def ctx(self) -> FieldContext:
        return self.hp.ctx

    @property
    def q(self) -> int:
        return self.hp.q

    @property
    def r(self) -> int:
        return self.hp.r

    @property
    def length(self) -> int:
        """N = n + q**r = (q**(r+1) - 1)//(q - 1)."""
        return self.hp.n + self.hp.points

    @cached_property
    def rep_table(self) -> np.ndarray:
        return self.reps if self.reps is not None else canonical_coset_reps(self.hp)

    @cached_property
    def hamming_basis(self) -> np.ndarray:
        return nullspace_basis(self.ctx, self.hp.h_hamming)

    @cached_property
    def extended_basis(self) -> np.ndarray:
        return nullspace_basis(self.ctx, self.hp.h_extended)

    @cached_property
    def permuted_check_matrix(self) -> np.ndarray:
        return permuted_check(self.hp, self.perm)


def build_code(hp: HammingPair, perm: PermTable, reps: Optional[np.ndarray] = None) -> CodeHandle:
    return CodeHandle(hp, perm, reps)


def codeword_count(code: CodeHandle) -> int:
    return code.q ** (code.length - code.r - 1)


def rank_closed_form(code: CodeHandle) -> int:
    """N - r - 1 + distension; the desk formula for the code's rank."""
    return code.length - code.r - 1 + distension(code.hp, code.perm)


def contains(code: CodeHandle, z) -> bool:
    """Membership by syndromes: split z = (x|y), read the Hamming syndrome a
    of x, and demand that y lie in the extended coset with label perm(a)."""
    zz = code.ctx.vector(z)
    if zz.shape[0] != code.length:
        raise DimensionMismatch(f"codeword must have length {code.length}")
    x = zz[: code.hp.n]
    y = zz[code.hp.n :]
    a = code.hp.h_hamming @ x % code.q
    ta = int(code.perm.images[vec_to_index(code.q, a)])
    target = np.concatenate(
        [np.zeros(1, dtype=DTYPE), index_to_vec(code.q, code.r, ta)]
    )
    lhs = code.hp.h_extended @ y % code.q
    return bool(np.array_equal(lhs, (-target) % code.q))


def codeword_blocks(code: CodeHandle, max_words: int = MAX_ENUMERATION) -> Iterator[np.ndarray]:
    """The code as one 2-D block per coset label a (in index order).

    Within a block the Hamming-component message is the outer loop and the
    extended-component message the inner one, each lexicographic, so the
    overall row order is reproducible.
    """
    count = codeword_count(code)
    if count > max_words:
        raise ValueError(f"codeword count {count} exceeds the enumeration guard {max_words}")
    q = code.q
    cwords = lex_messages(q, code.hamming_basis.shape[0]) @ code.hamming_basis % q
    dwords = lex_messages(q, code.extended_basis.shape[0]) @ code.extended_basis % q
    reps = code.rep_table
    images = code.perm.images
    points = code.hp.points
    for a_idx in range(points):
        ya = np.zeros(points, dtype=DTYPE)
        ta = int(images[a_idx])
        if ta != 0:
            ya[0] = 1
            ya[ta] = q - 1
        left = (reps[a_idx] + cwords) % q
        right = (ya + dwords) % q
        block = np.hstack(
            [np.repeat(left, len(right), axis=0), np.tile(right, (len(left), 1))]
        )
        yield block


def enumerate_codewords(code: CodeHandle, max_words: int = MAX_ENUMERATION) -> Iterator[np.ndarray]:
    """All codewords, one vector at a time, in the codeword_blocks order."""
    for block in codeword_blocks(code, max_words):
        yield from block


@dataclass(frozen=True)
class RankBasis:
    """The explicit rank basis: one mixed row per nonzero coset label,
    a Hamming-kernel block, and a completion of the intersection inside
    the extended component."""

    coset_rows: np.ndarray
    hamming_rows: np.ndarray
    completion_rows: np.ndarray

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack([self.coset_rows, self.hamming_rows, self.completion_rows])

    @property
    def count(self) -> int:
        return self.stacked.shape[0]


def rank_basis(code: CodeHandle) -> RankBasis:
    """Build the three-part spanning set whose size is N - r - 1 + distension.

    coset_rows: (x_a | e_0 - e_perm(a)) for every a != 0;
    hamming_rows: (z | 0) for the Hamming kernel basis z;
    completion_rows: (0 | v) for extended-kernel basis vectors v that extend
    the intersection with the permuted copy, scanned in kernel-basis order.
    """
    q = code.q
    n = code.hp.n
    points = code.hp.points
    N = code.length
    size = points - 1

    coset = np.zeros((size, N), dtype=DTYPE)
    coset[:, :n] = code.rep_table[1:]
    coset[:, n] = 1  # e_0 of the extended part
    targets = code.perm.images[1:]  # never 0: the permutation fixes 0
    coset[np.arange(size), n + targets] = q - 1  # -e_perm(a)

    hamming_rows = np.zeros((code.hamming_basis.shape[0], N), dtype=DTYPE)
    hamming_rows[:, :n] = code.hamming_basis

    inter = intersection_basis(code.hp, code.perm)
    dbasis = code.extended_basis
    kept = []
    base_rank = rank(code.ctx, inter)
    acc = inter
    for v in dbasis:
        cand = np.vstack([acc, v[None, :]])
        if rank(code.ctx, cand) > base_rank:
            kept.append(v)
            acc = cand
            base_rank += 1
    completion = np.zeros((len(kept), N), dtype=DTYPE)
    if kept:
        completion[:, n:] = np.array(kept, dtype=DTYPE)
    return RankBasis(coset, hamming_rows, completion)


# -- codeword file format ------------------------------------------------
#
# header "# q r N tau=<source>", then one codeword per line as N digits
# with no separators (only supported for q <= 9).


def write_codewords(path, code: CodeHandle, source: str, max_words: int = MAX_ENUMERATION) -> int:
    if code.q > 9:
        raise ValueError("digit-per-symbol codeword files need q <= 9")
    total = 0
    with open(path, "w") as fh:
        fh.write(f"# {code.q} {code.r} {code.length} tau={source}\n")
        for block in codeword_blocks(code, max_words):
            chars = (block + ord("0")).astype(np.uint8)
            lines = [row.tobytes().decode("ascii") for row in chars]
            fh.write("\n".join(lines) + "\n")
            total += len(lines)
    return total


def read_codewords(path) -> tuple[FieldContext, int, int, str, np.ndarray]:
    """Returns (ctx, r, N, source, words)."""
    with open(path) as fh:
        raw = fh.read().splitlines()
    if not raw or not raw[0].startswith("# "):
        raise ParseError("expected header '# q r N tau=<source>'", 1)
    toks = raw[0][2:].split()
    if len(toks) != 4 or not toks[3].startswith("tau="):
        raise ParseError("expected header '# q r N tau=<source>'", 1)
    try:
        q, r, N = int(toks[0]), int(toks[1]), int(toks[2])
    except ValueError:
        raise ParseError("header fields must be integers", 1) from None
    try:
        ctx = FieldContext(q)
    except ValueError as exc:
        raise ParseError(str(exc), 1) from None
    source = toks[3][len("tau=") :]
    words = np.zeros((len(raw) - 1, N), dtype=DTYPE)
    for i, line in enumerate(raw[1:]):
        if len(line) != N or not line.isdigit():
            raise ParseError(f"expected {N} digits", 2 + i)
        row = np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0")
        if (row >= q).any():
            raise ParseError(f"digits must lie in [0, {q - 1}]", 2 + i)
        words[i] = row
    return ctx, r, N, source, words
