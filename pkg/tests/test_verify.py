"""Independent verification: perfection, rank streams, audits, certificates."""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qperfect.affine import PermTable, identity_perm, shear_swap_perm
from qperfect.codes import build_code, codeword_blocks, codeword_count
from qperfect.hamming import build_hamming_pair
from qperfect.linalg import DimensionMismatch, FieldContext, rank
from qperfect.verify import (
    Isometry,
    PropelinearCertificate,
    VerifyReport,
    apply_isometry,
    apply_isometry_rows,
    audit_rank_basis,
    check_additivity,
    check_perfect,
    check_propelinear_certificate,
    covering_occupancy,
    identity_isometry,
    rank_by_elimination,
    translation_certificate,
    translation_isometry,
)


def small_code(q, r):
    ctx = FieldContext(q)
    return build_code(build_hamming_pair(ctx, r), identity_perm(ctx, r))


# -- reports ----------------------------------------------------------------


def test_report_json_and_truthiness():
    rep = VerifyReport("perfect", {"q": 2, "r": 2, "tau": "x"}, "pass", {"b": 1, "a": 2})
    decoded = json.loads(rep.to_json())
    assert decoded["check"] == "perfect"
    assert decoded["result"] == "pass"
    assert list(decoded["details"]) == ["a", "b"]  # keys come out sorted
    assert bool(rep)
    assert bool(VerifyReport("perfect", {}, "skipped", {}))
    assert not VerifyReport("perfect", {}, "fail", {})


# -- perfection -------------------------------------------------------------


def test_covering_occupancy_perfect_code():
    code = small_code(2, 2)
    assert covering_occupancy(2, 7, codeword_blocks(code)) == (0, 0)


def test_covering_occupancy_flags_moved_word():
    code = small_code(2, 2)
    blocks = [b.copy() for b in codeword_blocks(code)]
    blocks[0][0, 0] ^= 1  # now distance 1 from a real codeword
    overlapped, uncovered = covering_occupancy(2, 7, blocks)
    assert overlapped > 0 and uncovered > 0


def test_covering_occupancy_flags_duplicate_word():
    code = small_code(2, 2)
    blocks = [b.copy() for b in codeword_blocks(code)]
    blocks[0][1] = blocks[0][0]
    overlapped, uncovered = covering_occupancy(2, 7, blocks)
    assert overlapped > 0 and uncovered > 0


@pytest.mark.parametrize(
    "q,r,tau_builder",
    [
        (2, 2, lambda ctx, r: identity_perm(ctx, r)),
        (2, 3, lambda ctx, r: identity_perm(ctx, r)),
        (3, 2, lambda ctx, r: shear_swap_perm(ctx)),
    ],
)
def test_check_perfect_passes(q, r, tau_builder):
    ctx = FieldContext(q)
    code = build_code(build_hamming_pair(ctx, r), tau_builder(ctx, r))
    rep = check_perfect(code, label="t")
    assert rep.result == "pass"
    assert rep.details["sphere_packing"] is True
    assert rep.details["overlapped_cells"] == 0
    assert rep.details["uncovered_cells"] == 0
    assert rep.params == {"q": q, "r": r, "tau": "t"}


def test_check_perfect_budget_skip():
    code = small_code(5, 2)  # 5**31 cells
    rep = check_perfect(code)
    assert rep.result == "skipped"
    assert rep.details["reason"] == "state budget exceeded"
    assert bool(rep)


# -- streamed rank ----------------------------------------------------------


def test_rank_by_elimination_empty_stream():
    assert rank_by_elimination(FieldContext(3), []) == 0


def test_rank_by_elimination_accepts_rows_and_blocks():
    ctx = FieldContext(3)
    rows = [np.array([1, 0, 2]), np.array([[0, 1, 1], [1, 1, 0]])]
    assert rank_by_elimination(ctx, rows) == 2  # third row is the sum


@settings(max_examples=40, deadline=None)
@given(
    q=st.sampled_from([2, 3, 5]),
    rows=st.integers(0, 12),
    cols=st.integers(1, 8),
    chunk=st.sampled_from([1, 2, 3, 4096]),
    seed=st.integers(0, 2**32 - 1),
)
def test_rank_by_elimination_matches_dense_rank(q, rows, cols, chunk, seed):
    ctx = FieldContext(q)
    mat = np.random.default_rng(seed).integers(0, q, size=(rows, cols))
    assert rank_by_elimination(ctx, list(mat), chunk=chunk) == rank(ctx, mat)


# -- rank basis audit --------------------------------------------------------


def test_audit_rank_basis_with_enumeration():
    ctx = FieldContext(3)
    code = build_code(build_hamming_pair(ctx, 2), shear_swap_perm(ctx))
    rep = audit_rank_basis(code, label="shear")
    assert rep.result == "pass"
    assert rep.details["enumeration"] == "checked"
    assert rep.details["vectors"] == rep.details["expected"] == 12
    assert rep.details["enumerated_rank"] == 12
    assert rep.details["non_members"] == 0


def test_audit_rank_basis_enumeration_skip():
    ctx = FieldContext(3)
    code = build_code(build_hamming_pair(ctx, 2), shear_swap_perm(ctx))
    rep = audit_rank_basis(code, max_words=100)
    assert rep.result == "pass"
    assert rep.details["enumeration"] == "skipped"
    assert "enumerated_rank" not in rep.details


# -- additivity ---------------------------------------------------------------


def test_check_additivity_frozen_triples():
    ctx = FieldContext(3)
    hp2 = build_hamming_pair(ctx, 2)
    hp3 = build_hamming_pair(ctx, 3)
    hp4 = build_hamming_pair(ctx, 4)
    tau = shear_swap_perm(ctx)
    id1 = identity_perm(ctx, 1)
    id2 = identity_perm(ctx, 2)

    rep = check_additivity(hp2, tau, hp2, tau, hp4)
    assert rep.result == "pass"
    assert rep.details == {"left": 2, "right": 2, "combined": 4}

    rep = check_additivity(hp2, tau, build_hamming_pair(ctx, 1), id1, hp3)
    assert rep.result == "pass"
    assert rep.details == {"left": 2, "right": 0, "combined": 2}

    rep = check_additivity(hp2, id2, hp2, id2, hp4)
    assert rep.result == "pass"
    assert rep.details == {"left": 0, "right": 0, "combined": 0}


def test_check_additivity_dimension_mismatch():
    ctx = FieldContext(3)
    hp2 = build_hamming_pair(ctx, 2)
    tau = shear_swap_perm(ctx)
    with pytest.raises(DimensionMismatch):
        check_additivity(hp2, tau, hp2, tau, build_hamming_pair(ctx, 3))


# -- isometries ----------------------------------------------------------------


def test_isometry_validation():
    with pytest.raises(ValueError):
        Isometry(np.array([0, 0, 1]), np.tile(np.arange(2), (3, 1)))
    with pytest.raises(ValueError):
        Isometry(np.array([0, 1]), np.array([[0, 1], [1, 1]]))
    with pytest.raises(DimensionMismatch):
        Isometry(np.array([0, 1]), np.array([[0, 1]]))


def test_apply_isometry_frozen_example():
    phi = Isometry(np.array([1, 2, 0]), np.array([[0, 1], [1, 0], [0, 1]]))
    assert apply_isometry(phi, [1, 0, 1]).tolist() == [1, 0, 0]
    with pytest.raises(DimensionMismatch):
        apply_isometry(phi, [1, 0])
    with pytest.raises(ValueError):
        apply_isometry(phi, [2, 0, 0])


def test_translation_isometry_adds():
    ctx = FieldContext(3)
    phi = translation_isometry(ctx, [1, 2, 0])
    assert apply_isometry(phi, [2, 2, 1]).tolist() == [0, 1, 1]
    assert apply_isometry(identity_isometry(ctx, 3), [2, 2, 1]).tolist() == [2, 2, 1]


@settings(max_examples=40, deadline=None)
@given(
    q=st.sampled_from([2, 3, 5]),
    N=st.integers(1, 7),
    seed=st.integers(0, 2**32 - 1),
)
def test_isometries_preserve_hamming_distance(q, N, seed):
    rng = np.random.default_rng(seed)
    sigma = rng.permutation(N)
    pis = np.vstack([rng.permutation(q) for _ in range(N)])
    phi = Isometry(sigma, pis)
    u = rng.integers(0, q, size=N)
    v = rng.integers(0, q, size=N)
    du = apply_isometry(phi, u)
    dv = apply_isometry(phi, v)
    assert (du != dv).sum() == (u != v).sum()
    # the rowwise variant agrees with the pointwise one
    rows = rng.integers(0, q, size=(5, N))
    batched = apply_isometry_rows(phi, rows)
    for k in range(5):
        assert np.array_equal(batched[k], apply_isometry(phi, rows[k]))


# -- propelinear certificates ---------------------------------------------------


@pytest.mark.parametrize("q,r", [(2, 2), (3, 1)])
def test_translation_certificate_full_pass(q, r):
    code = small_code(q, r)
    cert = translation_certificate(code)
    rep = check_propelinear_certificate(code, cert, label="identity")
    assert rep.result == "pass"
    assert rep.details["closure_mode"] == "full"
    assert rep.details["closure_triples"] == codeword_count(code) ** 3


def test_certificate_skip_gate():
    code = small_code(2, 2)
    cert = translation_certificate(code)
    rep = check_propelinear_certificate(code, cert, max_code=8)
    assert rep.result == "skipped"
    assert rep.details["codewords"] == 16


def test_certificate_rejects_identity_isometry_at_nonzero_word():
    code = small_code(2, 2)
    cert = translation_certificate(code)
    isos = list(cert.isometries)
    assert cert.words[1].any()
    isos[1] = identity_isometry(code.ctx, code.length)
    rep = check_propelinear_certificate(code, PropelinearCertificate(cert.words, isos))
    assert rep.result == "fail" and rep.details["law"] == "zero_image"
    assert rep.details["index"] == 1


def test_certificate_rejects_swapped_labels():
    code = small_code(2, 2)
    cert = translation_certificate(code)
    isos = list(cert.isometries)
    isos[1], isos[2] = isos[2], isos[1]
    rep = check_propelinear_certificate(code, PropelinearCertificate(cert.words, isos))
    assert rep.result == "fail" and rep.details["law"] == "zero_image"


def test_certificate_rejects_coordinate_swap():
    # a transposed sigma keeps the zero image but moves the code
    code = small_code(2, 2)
    cert = translation_certificate(code)
    isos = list(cert.isometries)
    sigma = np.arange(7)
    sigma[[0, 1]] = sigma[[1, 0]]
    isos[2] = Isometry(sigma, isos[2].pis)
    rep = check_propelinear_certificate(code, PropelinearCertificate(cert.words, isos))
    assert rep.result == "fail" and rep.details["law"] == "code_stability"
    assert rep.details["index"] == 2


def test_certificate_rejects_mutated_symbol_table():
    # swap two nonzero symbols in one table: zero image survives, the
    # code's translation structure does not
    code = small_code(3, 1)
    cert = translation_certificate(code)
    i = next(k for k in range(len(cert.words)) if cert.words[k].any())
    j = int(np.flatnonzero(cert.words[i])[0])
    pis = cert.isometries[i].pis.copy()
    pis[j, [1, 2]] = pis[j, [2, 1]]
    isos = list(cert.isometries)
    isos[i] = Isometry(cert.isometries[i].sigma, pis)
    rep = check_propelinear_certificate(code, PropelinearCertificate(cert.words, isos))
    assert rep.result == "fail" and rep.details["law"] == "code_stability"


def code_coordinate_automorphism(code):
    """Helper: a nonidentity coordinate permutation stabilizing the code,
    found by scanning transposition products (test scaffolding only)."""
    import itertools

    words = np.vstack(list(codeword_blocks(code)))
    word_set = {tuple(w) for w in words}
    for p in itertools.permutations(range(code.length)):
        if p == tuple(range(code.length)):
            continue
        if {tuple(row[list(p)]) for row in words} == word_set:
            return np.array(p)
    raise AssertionError("no coordinate automorphism found")


def closure_broken_certificate(code):
    """A certificate passing zero_image and code_stability but not closure:
    one translation is twisted by a coordinate automorphism of the code."""
    cert = translation_certificate(code)
    auto = code_coordinate_automorphism(code)
    i = next(k for k in range(len(cert.words)) if cert.words[k].any())
    sigma = np.empty(code.length, dtype=int)
    sigma[auto] = np.arange(code.length)
    isos = list(cert.isometries)
    isos[i] = Isometry(sigma, isos[i].pis)
    return PropelinearCertificate(cert.words, isos)


def test_certificate_rejects_broken_closure():
    code = small_code(2, 2)
    rep = check_propelinear_certificate(code, closure_broken_certificate(code))
    assert rep.result == "fail" and rep.details["law"] == "closure"


def test_certificate_sampled_mode():
    code = small_code(3, 1)
    cert = translation_certificate(code)
    rep = check_propelinear_certificate(code, cert, max_full_triples=1)
    assert rep.result == "probabilistic"
    assert rep.details["closure_mode"] == "sampled"
    assert rep.details["closure_triples"] == 5000


def test_certificate_sampled_mode_still_catches_broken_closure():
    code = small_code(2, 2)
    cert = closure_broken_certificate(code)
    rep = check_propelinear_certificate(code, cert, max_full_triples=1, seed=0)
    assert rep.result == "fail" and rep.details["law"] == "closure"


def test_certificate_domain_must_match():
    code = small_code(2, 2)
    cert = translation_certificate(code)
    words = cert.words.copy()
    words[1, 0] ^= 1
    with pytest.raises(ValueError):
        check_propelinear_certificate(code, PropelinearCertificate(words, cert.isometries))
    with pytest.raises(DimensionMismatch):
        PropelinearCertificate(cert.words, cert.isometries[:-1])
