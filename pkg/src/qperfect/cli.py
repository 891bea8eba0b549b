"""Command line front end.

Subcommands: matrices (write the parity checks), build (enumerate a code),
verify (run the checks as JSON lines), series (distension/rank table for the
repeated shear construction).  Exit codes: 0 all checks passed, 1 at least
one check failed, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

import numpy as np

from .affine import (
    PermTable,
    RegularSubgroup,
    VERIFY_GUARD,
    identity_perm,
    read_perm,
    series_group,
    series_perm,
    shear_group,
    shear_swap_perm,
    translation_group,
    verify_automorphism,
    verify_regular_subgroup,
)
from .codes import (
    MAX_ENUMERATION,
    build_code,
    codeword_count,
    distension,
    rank_closed_form,
    write_codewords,
)
from .hamming import MAX_POINTS, build_hamming_pair, stacked_parity
from .linalg import FieldContext, ParseError, write_matrix
from .verify import (
    MAX_SPACE_CELLS,
    VerifyReport,
    audit_rank_basis,
    check_additivity,
    check_perfect,
    check_propelinear_certificate,
    rank_by_elimination,
    translation_certificate,
)
from .codes import codeword_blocks

CHECK_ORDER = (
    "perfect",
    "rank_equivalence",
    "basis_audit",
    "additivity",
    "group_premises",
    "certificate",
)


class UsageError(Exception):
    pass


def _field(q: int) -> FieldContext:
    try:
        return FieldContext(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _resolve_perm(
    ctx: FieldContext, r: int, source: str, copies: Optional[int]
) -> tuple[PermTable, Optional[RegularSubgroup]]:
    """Map a --tau argument to a permutation and, for builtins, the regular
    subgroup whose automorphism induces it (None for file permutations)."""
    if source == "builtin:identity":
        return identity_perm(ctx, r), translation_group(ctx, r)
    if source == "builtin:shear":
        if r != 2:
            raise UsageError("builtin:shear needs r = 2")
        try:
            return shear_swap_perm(ctx), shear_group(ctx)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if source == "builtin:series":
        if copies is None:
            raise UsageError("builtin:series needs --i")
        try:
            return series_perm(ctx, r, copies), series_group(ctx, r, copies)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if source.startswith("builtin:"):
        raise UsageError(f"unknown builtin permutation {source!r}")
    perm = read_perm(source)
    if perm.ctx != ctx or perm.r != r:
        raise UsageError(
            f"permutation file is for q={perm.ctx.q}, r={perm.r}; expected q={ctx.q}, r={r}"
        )
    return perm, None


def _is_identity(perm: PermTable) -> bool:
    return bool(np.array_equal(perm.images, np.arange(perm.size)))


def cmd_matrices(args) -> int:
    ctx = _field(args.q)
    hp = build_hamming_pair(ctx, args.r)
    os.makedirs(args.out, exist_ok=True)
    write_matrix(os.path.join(args.out, "hamming_check.txt"), ctx, hp.h_hamming)
    write_matrix(os.path.join(args.out, "columns_check.txt"), ctx, hp.h_columns)
    write_matrix(os.path.join(args.out, "extended_check.txt"), ctx, hp.h_extended)
    write_matrix(os.path.join(args.out, "stacked_check.txt"), ctx, stacked_parity(hp))
    return 0


def cmd_build(args) -> int:
    ctx = _field(args.q)
    hp = build_hamming_pair(ctx, args.r)
    perm, _ = _resolve_perm(ctx, args.r, args.tau, args.i)
    code = build_code(hp, perm)
    os.makedirs(args.out, exist_ok=True)
    count = codeword_count(code)
    summary = {
        "q": args.q,
        "r": args.r,
        "tau": args.tau,
        "length": code.length,
        "codewords": count,
        "distension": distension(hp, perm),
        "rank": rank_closed_form(code),
    }
    if count <= args.max_codewords and ctx.q <= 9:
        path = os.path.join(args.out, "codewords.txt")
        write_codewords(path, code, args.tau, max_words=args.max_codewords)
        summary["codewords_file"] = "codewords.txt"
    else:
        summary["codewords_file"] = None
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        fh.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    return 0


def _series_split(ctx: FieldContext, r: int, copies: int):
    """A left/right decomposition of the series permutation for the
    additivity check, or None when there is nothing to split."""
    if copies >= 1 and r > 2 * copies:
        left_r, left_copies = 2 * copies, copies
        right_r, right_copies = r - 2 * copies, 0
    elif copies >= 2 and r == 2 * copies:
        left_r, left_copies = 2 * (copies - 1), copies - 1
        right_r, right_copies = 2, 1
    else:
        return None
    return (
        build_hamming_pair(ctx, left_r),
        series_perm(ctx, left_r, left_copies),
        build_hamming_pair(ctx, right_r),
        series_perm(ctx, right_r, right_copies),
    )


def cmd_verify(args) -> int:
    ctx = _field(args.q)
    hp = build_hamming_pair(ctx, args.r)
    perm, group = _resolve_perm(ctx, args.r, args.tau, args.i)
    code = build_code(hp, perm)
    label = args.tau
    wanted = CHECK_ORDER if args.checks is None else tuple(args.checks.split(","))
    unknown = [c for c in wanted if c not in CHECK_ORDER]
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(unknown)}")
    reports: list[VerifyReport] = []
    params = {"q": args.q, "r": args.r, "tau": label}

    for name in CHECK_ORDER:
        if name not in wanted:
            continue
        if name == "perfect":
            reports.append(check_perfect(code, max_cells=args.max_space_cells, label=label))
        elif name == "rank_equivalence":
            count = codeword_count(code)
            if count > args.max_codewords:
                details = {"reason": "enumeration budget exceeded", "codewords": count}
                reports.append(VerifyReport(name, params, "skipped", details))
            else:
                streamed = rank_by_elimination(ctx, codeword_blocks(code, args.max_codewords))
                closed = rank_closed_form(code)
                details = {"enumerated_rank": streamed, "closed_form": closed}
                result = "pass" if streamed == closed else "fail"
                reports.append(VerifyReport(name, params, result, details))
        elif name == "basis_audit":
            reports.append(audit_rank_basis(code, max_words=args.max_codewords, label=label))
        elif name == "additivity":
            split = None
            if args.tau == "builtin:series" and args.i is not None:
                split = _series_split(ctx, args.r, args.i)
            if split is None:
                details = {"reason": "no blockwise decomposition for this permutation"}
                reports.append(VerifyReport(name, params, "skipped", details))
            else:
                hp1, p1, hp2, p2 = split
                reports.append(check_additivity(hp1, p1, hp2, p2, hp, label=label))
        elif name == "group_premises":
            if group is None:
                details = {"reason": "no construction data for an external permutation"}
                reports.append(VerifyReport(name, params, "skipped", details))
            elif group.size > VERIFY_GUARD:
                details = {"reason": "verification guard exceeded", "size": group.size}
                reports.append(VerifyReport(name, params, "skipped", details))
            else:
                sub = verify_regular_subgroup(group)
                aut = verify_automorphism(group, perm)
                details = {
                    "regular_subgroup": sub.ok,
                    "automorphism": aut.ok,
                    "diagnostic": sub.detail or aut.detail,
                }
                result = "pass" if sub.ok and aut.ok else "fail"
                reports.append(VerifyReport(name, params, result, details))
        elif name == "certificate":
            if not _is_identity(perm):
                details = {"reason": "no builtin certificate for a non-identity permutation"}
                reports.append(VerifyReport(name, params, "skipped", details))
            elif codeword_count(code) > args.max_cert_codewords:
                details = {
                    "reason": "code too large for certificate checking",
                    "codewords": codeword_count(code),
                }
                reports.append(VerifyReport(name, params, "skipped", details))
            else:
                cert = translation_certificate(code)
                reports.append(
                    check_propelinear_certificate(
                        code, cert, max_code=args.max_cert_codewords, label=label
                    )
                )

    for report in reports:
        print(report.to_json())
    return 1 if any(r.result == "fail" for r in reports) else 0


def cmd_series(args) -> int:
    ctx = _field(args.q)
    if ctx.q < 3:
        raise UsageError("series needs q >= 3")
    hp = build_hamming_pair(ctx, args.r)
    N = hp.n + hp.points
    base = N - args.r - 1
    print(f"# q={ctx.q} r={args.r} N={N}")
    failed = False
    for copies in range(args.r // 2 + 1):
        perm = series_perm(ctx, args.r, copies)
        d = distension(hp, perm)
        expected = 2 * copies
        agrees = d == expected
        failed = failed or not agrees
        print(
            f"copies={copies} distension={d} rank={base + d} "
            f"expected_distension={expected} expected_rank={base + expected} "
            f"agrees={'yes' if agrees else 'no'}"
        )
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qperfect",
        description="Build and verify q-ary perfect codes glued by affine-group permutations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tau=True):
        p.add_argument("--q", type=int, required=True, help="field size (prime)")
        p.add_argument("--r", type=int, required=True, help="syndrome dimension")
        if tau:
            p.add_argument(
                "--tau",
                default="builtin:identity",
                help="gluing permutation: a PermTable file or "
                "builtin:identity | builtin:shear | builtin:series",
            )
            p.add_argument("--i", type=int, default=None, help="shear copies for builtin:series")

    p_mat = sub.add_parser("matrices", help="write the parity-check matrices")
    common(p_mat, tau=False)
    p_mat.add_argument("--out", required=True, help="output directory")
    p_mat.set_defaults(func=cmd_matrices)

    p_build = sub.add_parser("build", help="enumerate a code and write a summary")
    common(p_build)
    p_build.add_argument("--out", required=True, help="output directory")
    p_build.add_argument("--max-codewords", type=int, default=MAX_ENUMERATION)
    p_build.set_defaults(func=cmd_build)

    p_verify = sub.add_parser("verify", help="run verification checks, one JSON line each")
    common(p_verify)
    p_verify.add_argument("--checks", default=None, help="comma list of checks to run")
    p_verify.add_argument("--max-space-cells", type=int, default=MAX_SPACE_CELLS)
    p_verify.add_argument("--max-codewords", type=int, default=MAX_ENUMERATION)
    p_verify.add_argument("--max-cert-codewords", type=int, default=1 << 12)
    p_verify.set_defaults(func=cmd_verify)

    p_series = sub.add_parser("series", help="distension/rank table for repeated shear blocks")
    common(p_series, tau=False)
    p_series.set_defaults(func=cmd_series)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
