"""Desk-scale verification oracles, independent of the construction paths.

Every check returns a VerifyReport that serializes to one JSON line:
{"check": ..., "params": {"q", "r", "tau"}, "result": "pass" | "fail" |
"skipped" | "probabilistic", "details": {...}}.  Checks never throw on a
mathematical failure, only on contract violations (bad shapes, budgets are
reported as skipped).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .affine import PermTable, iterate_perms
from .codes import (
    MAX_ENUMERATION,
    CodeHandle,
    codeword_blocks,
    codeword_count,
    contains,
    distension,
    rank_basis,
    rank_closed_form,
)
from .hamming import HammingPair
from .linalg import DTYPE, DimensionMismatch, FieldContext, _eliminate, rank

__all__ = [
    "MAX_CERT_CODE",
    "MAX_FULL_TRIPLES",
    "MAX_SPACE_CELLS",
    "Isometry",
    "PropelinearCertificate",
    "VerifyReport",
    "apply_isometry",
    "apply_isometry_rows",
    "audit_rank_basis",
    "check_additivity",
    "check_perfect",
    "check_propelinear_certificate",
    "covering_occupancy",
    "identity_isometry",
    "rank_by_elimination",
    "translation_certificate",
    "translation_isometry",
]

MAX_SPACE_CELLS = 1 << 26  # occupancy array budget for the covering check
MAX_CERT_CODE = 1 << 12  # largest code a certificate check will enumerate
MAX_FULL_TRIPLES = 1 << 24  # closure is checked on all triples below this


@dataclass(frozen=True)
class VerifyReport:
    check: str
    params: dict
    result: str
    details: dict

    def to_json(self) -> str:
        payload = {
            "check": self.check,
            "params": self.params,
            "result": self.result,
            "details": self.details,
        }
        return json.dumps(payload, sort_keys=True)

    def __bool__(self) -> bool:
        return self.result != "fail"


def _params(code: CodeHandle, label: str) -> dict:
    return {"q": code.q, "r": code.r, "tau": label}


# -- perfection by exhaustive covering -----------------------------------


def covering_occupancy(q: int, N: int, blocks: Iterable[np.ndarray]) -> tuple[int, int]:
    """Mark every word of the blocks plus its distance-1 neighbours in a
    q**N occupancy array; return (overlapped_cells, uncovered_cells).

    A cell collects at most 1 + N(q-1) marks, so uint8 cells cannot wrap
    for any N this module accepts.
    """
    cells = q**N
    occ = np.zeros(cells, dtype=np.uint8)
    powers = q ** np.arange(N, dtype=DTYPE)
    for block in blocks:
        idx = block @ powers
        np.add.at(occ, idx, 1)
        for k in range(N):
            col = block[:, k]
            base = idx - col * powers[k]
            for delta in range(1, q):
                np.add.at(occ, base + (col + delta) % q * powers[k], 1)
    overlapped = int((occ > 1).sum())
    uncovered = int((occ == 0).sum())
    return overlapped, uncovered


def check_perfect(
    code: CodeHandle, max_cells: int = MAX_SPACE_CELLS, label: str = "custom"
) -> VerifyReport:
    """Exhaustive perfection check: radius-1 balls around the codewords
    tile the whole space, with the sphere-packing count as a cross-check."""
    q, N = code.q, code.length
    params = _params(code, label)
    cells = q**N
    if cells > max_cells:
        details = {"reason": "state budget exceeded", "cells": cells, "budget": max_cells}
        return VerifyReport("perfect", params, "skipped", details)
    size = codeword_count(code)
    ball = 1 + N * (q - 1)
    packing = size * ball == cells
    overlapped, uncovered = covering_occupancy(q, N, codeword_blocks(code))
    details = {
        "length": N,
        "codewords": size,
        "ball": ball,
        "cells": cells,
        "sphere_packing": packing,
        "overlapped_cells": overlapped,
        "uncovered_cells": uncovered,
    }
    ok = packing and overlapped == 0 and uncovered == 0
    return VerifyReport("perfect", params, "pass" if ok else "fail", details)


# -- rank oracles ---------------------------------------------------------


def rank_by_elimination(ctx: FieldContext, words: Iterable, chunk: int = 4096) -> int:
    """Rank of a streamed set of vectors (1-D items or 2-D blocks).

    Rows accumulate in chunks; after each chunk only an echelon basis is
    kept, so memory stays at O(chunk x length) regardless of the stream.
    """
    basis: Optional[np.ndarray] = None
    buf: list[np.ndarray] = []
    buffered = 0

    def crunch() -> None:
        nonlocal basis, buf, buffered
        if not buf:
            return
        rows = np.vstack(buf)
        if basis is not None:
            rows = np.vstack([basis, rows])
        work = rows % ctx.q
        pivots = _eliminate(work, ctx.q, reduced=False)
        basis = work[: len(pivots)].copy()
        buf = []
        buffered = 0

    for item in words:
        arr = np.atleast_2d(np.asarray(item, dtype=DTYPE))
        buf.append(arr)
        buffered += arr.shape[0]
        if buffered >= chunk:
            crunch()
    crunch()
    return 0 if basis is None else int(basis.shape[0])


def audit_rank_basis(
    code: CodeHandle, max_words: int = MAX_ENUMERATION, label: str = "custom"
) -> VerifyReport:
    """Audit the explicit rank basis: the vectors are independent, they all
    lie in the code, and their number matches the closed form.  Where the
    code is small enough to enumerate, also confirm they span it."""
    rb = rank_basis(code)
    stacked = rb.stacked
    total = rb.count
    independent = rank(code.ctx, stacked) == total
    non_members = sum(0 if contains(code, row) else 1 for row in stacked)
    expected = rank_closed_form(code)
    details = {
        "vectors": total,
        "expected": expected,
        "independent": independent,
        "non_members": non_members,
        "coset_rows": int(rb.coset_rows.shape[0]),
        "hamming_rows": int(rb.hamming_rows.shape[0]),
        "completion_rows": int(rb.completion_rows.shape[0]),
    }
    ok = independent and non_members == 0 and total == expected
    if codeword_count(code) <= max_words:
        full = rank_by_elimination(code.ctx, codeword_blocks(code, max_words))
        details["enumeration"] = "checked"
        details["enumerated_rank"] = full
        ok = ok and full == total
    else:
        details["enumeration"] = "skipped"
    return VerifyReport("basis_audit", _params(code, label), "pass" if ok else "fail", details)


def check_additivity(
    hp1: HammingPair,
    perm1: PermTable,
    hp2: HammingPair,
    perm2: PermTable,
    hp12: HammingPair,
    label: str = "custom",
) -> VerifyReport:
    """Distension of the blockwise permutation equals the sum of the
    blocks' distensions, every term computed by the stacked-rank route."""
    combined = iterate_perms(perm1, perm2)
    if hp12.r != combined.r or hp12.ctx != combined.ctx:
        raise DimensionMismatch("combined parity kit does not match the permutations")
    left = distension(hp1, perm1)
    right = distension(hp2, perm2)
    both = distension(hp12, combined)
    params = {"q": hp12.q, "r": hp12.r, "tau": label}
    details = {"left": left, "right": right, "combined": both}
    return VerifyReport(
        "additivity", params, "pass" if both == left + right else "fail", details
    )


# -- isometries and propelinear certificates ------------------------------


@dataclass(frozen=True)
class Isometry:
    """A coordinate permutation plus one symbol substitution per coordinate:
    the image w of v has w[sigma[k]] = pis[sigma[k]][v[k]]."""

    sigma: np.ndarray
    pis: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma, dtype=DTYPE)
        pis = np.asarray(self.pis, dtype=DTYPE)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "pis", pis)
        N = sigma.shape[0]
        if pis.ndim != 2 or pis.shape[0] != N:
            raise DimensionMismatch("need one symbol table per coordinate")
        if not np.array_equal(np.sort(sigma), np.arange(N, dtype=DTYPE)):
            raise ValueError("sigma is not a permutation of the coordinates")
        q = pis.shape[1]
        if not np.array_equal(np.sort(pis, axis=1), np.tile(np.arange(q, dtype=DTYPE), (N, 1))):
            raise ValueError("every symbol table must permute 0..q-1")


def identity_isometry(ctx: FieldContext, N: int) -> Isometry:
    return Isometry(np.arange(N, dtype=DTYPE), np.tile(np.arange(ctx.q, dtype=DTYPE), (N, 1)))


def translation_isometry(ctx: FieldContext, x) -> Isometry:
    """The isometry v -> v + x (identity coordinate permutation)."""
    xx = ctx.vector(x)
    N = xx.shape[0]
    pis = (np.arange(ctx.q, dtype=DTYPE)[None, :] + xx[:, None]) % ctx.q
    return Isometry(np.arange(N, dtype=DTYPE), pis)


def apply_isometry(phi: Isometry, v) -> np.ndarray:
    vv = np.asarray(v, dtype=DTYPE)
    N, q = phi.pis.shape
    if vv.shape != (N,):
        raise DimensionMismatch(f"word must have length {N}")
    if ((vv < 0) | (vv >= q)).any():
        raise ValueError(f"symbols must lie in [0, {q - 1}]")
    w = np.empty(N, dtype=DTYPE)
    w[phi.sigma] = phi.pis[phi.sigma, vv]
    return w


def apply_isometry_rows(phi: Isometry, words: np.ndarray) -> np.ndarray:
    """apply_isometry for every row of a 2-D array at once."""
    N = phi.sigma.shape[0]
    tables = phi.pis[phi.sigma]  # row k: symbol table used at target sigma[k]
    cols = tables[np.arange(N)[:, None], words.T]  # [k, m] = pis[sigma[k]][words[m, k]]
    out = np.empty_like(words)
    out[:, phi.sigma] = cols.T
    return out


@dataclass(frozen=True)
class PropelinearCertificate:
    """One isometry per codeword, claimed to form a regular group action."""

    words: np.ndarray
    isometries: tuple

    def __post_init__(self):
        object.__setattr__(self, "isometries", tuple(self.isometries))
        if len(self.isometries) != self.words.shape[0]:
            raise DimensionMismatch("need exactly one isometry per codeword")


def translation_certificate(code: CodeHandle, max_words: int = MAX_ENUMERATION) -> PropelinearCertificate:
    """The certificate {v -> v + x : x in code}; a valid regular action
    whenever the code is linear (e.g. the identity gluing permutation)."""
    words = np.vstack(list(codeword_blocks(code, max_words)))
    isos = tuple(translation_isometry(code.ctx, w) for w in words)
    return PropelinearCertificate(words, isos)


def check_propelinear_certificate(
    code: CodeHandle,
    cert: PropelinearCertificate,
    max_code: int = MAX_CERT_CODE,
    max_full_triples: int = MAX_FULL_TRIPLES,
    samples: int = 5000,
    seed: int = 0,
    label: str = "custom",
) -> VerifyReport:
    """Check a supplied certificate of a regular isometry action on the code:
    (i) every isometry maps the code onto itself, (ii) the isometry labelled
    by x sends the zero word to x, (iii) the closure law
    phi_x(phi_y(w)) = phi_{phi_x(y)}(w) on codewords.  Closure is exhaustive
    up to the triple budget and sampled (result "probabilistic") beyond it.
    No search is attempted: a missing or wrong certificate is just rejected.
    """
    q, N = code.q, code.length
    params = _params(code, label)
    size = codeword_count(code)
    if size > max_code:
        details = {"reason": "code too large for certificate checking", "codewords": size, "budget": max_code}
        return VerifyReport("certificate", params, "skipped", details)

    powers = q ** np.arange(N, dtype=DTYPE)
    code_enc = np.sort(
        np.concatenate([block @ powers for block in codeword_blocks(code)])
    )
    M = code_enc.shape[0]
    if cert.words.shape != (M, N):
        raise ValueError(f"certificate domain must be the {M} codewords")
    cenc = cert.words @ powers
    if not np.array_equal(np.sort(cenc), code_enc):
        raise ValueError("certificate domain is not the code")
    lookup = {int(e): i for i, e in enumerate(cenc)}

    def failure(law: str, **where) -> VerifyReport:
        details = {"codewords": M, "law": law, **where}
        return VerifyReport("certificate", params, "fail", details)

    zero = np.zeros(N, dtype=DTYPE)
    for i in range(M):
        if not np.array_equal(apply_isometry(cert.isometries[i], zero), cert.words[i]):
            return failure("zero_image", index=i)
    for i in range(M):
        image_enc = apply_isometry_rows(cert.isometries[i], cert.words) @ powers
        if not np.array_equal(np.sort(image_enc), code_enc):
            return failure("code_stability", index=i)

    if M**3 <= max_full_triples:
        mode, triples = "full", M**3
        for ix in range(M):
            phix = cert.isometries[ix]
            xy_enc = apply_isometry_rows(phix, cert.words) @ powers
            for iy in range(M):
                phiy = cert.isometries[iy]
                lhs = apply_isometry_rows(phix, apply_isometry_rows(phiy, cert.words))
                rhs = apply_isometry_rows(cert.isometries[lookup[int(xy_enc[iy])]], cert.words)
                same = np.all(lhs == rhs, axis=1)
                if not same.all():
                    iw = int(np.flatnonzero(~same)[0])
                    return failure("closure", x=ix, y=iy, w=iw)
        result = "pass"
    else:
        mode, triples = "sampled", samples
        rng = np.random.default_rng(seed)
        picks = rng.integers(0, M, size=(samples, 3))
        for ix, iy, iw in picks:
            phix, phiy = cert.isometries[ix], cert.isometries[iy]
            w = cert.words[iw]
            lhs = apply_isometry(phix, apply_isometry(phiy, w))
            xy = lookup[int(apply_isometry(phix, cert.words[iy]) @ powers)]
            rhs = apply_isometry(cert.isometries[xy], w)
            if not np.array_equal(lhs, rhs):
                return failure("closure", x=int(ix), y=int(iy), w=int(iw))
        result = "probabilistic"

    details = {"codewords": M, "closure_mode": mode, "closure_triples": int(triples)}
    return VerifyReport("certificate", params, result, details)
