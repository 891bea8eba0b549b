"""q-ary perfect codes from affine-group permutations, with verification."""

from .linalg import (
    DimensionMismatch,
    FieldContext,
    ParseError,
    is_invertible,
    mat_inv,
    mat_mul,
    mat_vec,
    nullspace_basis,
    rank,
    solve,
)
from .hamming import (
    HammingPair,
    all_vectors,
    build_hamming_pair,
    extended_coset_leader,
    hamming_coset_rep,
    index_to_vec,
    stacked_parity,
    syndrome,
    vec_to_index,
)
from .affine import (
    AffineElement,
    CheckResult,
    PermTable,
    RegularSubgroup,
    apply_element,
    compose,
    direct_product,
    identity_element,
    identity_perm,
    inverse_element,
    iterate_perms,
    linear_perm,
    perm_inverse,
    series_group,
    series_perm,
    shear_group,
    shear_swap_perm,
    translation_group,
    verify_automorphism,
    verify_regular_subgroup,
)
from .codes import (
    CodeHandle,
    RankBasis,
    build_code,
    codeword_count,
    contains,
    distension,
    distension_oracle,
    enumerate_codewords,
    intersection_basis,
    permuted_check,
    rank_basis,
    rank_closed_form,
)
from .verify import (
    Isometry,
    PropelinearCertificate,
    VerifyReport,
    apply_isometry,
    audit_rank_basis,
    check_additivity,
    check_perfect,
    check_propelinear_certificate,
    rank_by_elimination,
    translation_certificate,
    translation_isometry,
)

__version__ = "0.1.0"
