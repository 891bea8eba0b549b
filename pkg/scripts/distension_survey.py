"""Survey the distension statistics of random zero-fixing permutations and
compare them with the structured ones (identity, linear, shear-swap).

Usage: python scripts/distension_survey.py [--q Q] [--r R] [--samples N] [--seed S]
"""

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from qperfect.affine import PermTable, identity_perm, linear_perm, shear_swap_perm
from qperfect.codes import distension
from qperfect.hamming import build_hamming_pair
from qperfect.linalg import FieldContext


@dataclass(frozen=True)
class SurveyConfig:
    q: int = 3
    r: int = 2
    samples: int = 500
    seed: int = 0


def random_zero_fixing(ctx, r, rng):
    size = ctx.q**r
    images = np.concatenate([[0], 1 + rng.permutation(size - 1)])
    return PermTable(ctx, r, images)


def random_invertible(ctx, r, rng):
    while True:
        m = rng.integers(0, ctx.q, size=(r, r))
        try:
            return linear_perm(ctx, m)
        except ValueError:
            continue


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=int, default=SurveyConfig.q)
    parser.add_argument("--r", type=int, default=SurveyConfig.r)
    parser.add_argument("--samples", type=int, default=SurveyConfig.samples)
    parser.add_argument("--seed", type=int, default=SurveyConfig.seed)
    args = parser.parse_args()
    cfg = SurveyConfig(args.q, args.r, args.samples, args.seed)

    ctx = FieldContext(cfg.q)
    hp = build_hamming_pair(ctx, cfg.r)
    rng = np.random.default_rng(cfg.seed)

    print(f"# q={cfg.q} r={cfg.r} samples={cfg.samples} seed={cfg.seed}")
    print("identity:", distension(hp, identity_perm(ctx, cfg.r)))
    if cfg.r == 2 and cfg.q >= 3:
        print("shear-swap:", distension(hp, shear_swap_perm(ctx)))
    linear_hist = Counter(
        distension(hp, random_invertible(ctx, cfg.r, rng)) for _ in range(20)
    )
    print("20 random linear permutations:", dict(sorted(linear_hist.items())))

    hist = Counter(
        distension(hp, random_zero_fixing(ctx, cfg.r, rng)) for _ in range(cfg.samples)
    )
    total = sum(hist.values())
    print("random zero-fixing permutations:")
    for value in sorted(hist):
        count = hist[value]
        print(f"  distension {value}: {count:6d}  ({100.0 * count / total:5.1f} %)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
