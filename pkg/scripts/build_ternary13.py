"""Build the length-13 ternary code glued by the shear-swap permutation,
then run the full verification stack on it and write the artifacts.

Usage: python scripts/build_ternary13.py [--out DIR]
"""

import argparse
import json
import os
from dataclasses import dataclass

from qperfect.affine import shear_group, shear_swap_perm, verify_automorphism, verify_regular_subgroup
from qperfect.codes import (
    build_code,
    codeword_blocks,
    codeword_count,
    distension,
    distension_oracle,
    rank_closed_form,
    write_codewords,
)
from qperfect.hamming import build_hamming_pair
from qperfect.linalg import FieldContext
from qperfect.verify import audit_rank_basis, check_perfect, rank_by_elimination


@dataclass(frozen=True)
class RunConfig:
    q: int = 3
    r: int = 2
    out: str = "out/ternary13"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=RunConfig.out)
    cfg = RunConfig(out=parser.parse_args().out)

    ctx = FieldContext(cfg.q)
    group = shear_group(ctx)
    tau = shear_swap_perm(ctx)
    print("regular subgroup:", verify_regular_subgroup(group).ok)
    print("automorphism:    ", verify_automorphism(group, tau).ok)

    hp = build_hamming_pair(ctx, cfg.r)
    code = build_code(hp, tau)
    print(f"length {code.length}, {codeword_count(code)} codewords")
    print("distension:", distension(hp, tau), "(oracle:", distension_oracle(hp, tau), ")")

    perfect = check_perfect(code, label="builtin:shear")
    print(perfect.to_json())
    audit = audit_rank_basis(code, label="builtin:shear")
    print(audit.to_json())
    streamed = rank_by_elimination(ctx, codeword_blocks(code))
    closed = rank_closed_form(code)
    print(f"rank: streamed {streamed}, closed form {closed}")

    os.makedirs(cfg.out, exist_ok=True)
    written = write_codewords(os.path.join(cfg.out, "codewords.txt"), code, "builtin:shear")
    summary = {
        "q": cfg.q,
        "r": cfg.r,
        "length": code.length,
        "codewords": written,
        "distension": distension(hp, tau),
        "rank": closed,
        "perfect": perfect.result,
        "basis_audit": audit.result,
    }
    with open(os.path.join(cfg.out, "summary.json"), "w") as fh:
        fh.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    print(f"wrote {written} codewords and summary.json to {cfg.out}")

    ok = (
        perfect.result == "pass"
        and audit.result == "pass"
        and streamed == closed
    )
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
