#!/usr/bin/env python3
"""Measure how the exact TDR decider scales with dimension.

The LP has 2**p - 1 columns, so expect roughly 4x cost per +1 in p.  This
script prints a timing table on random feasible instances and their forced
triangle-violating twins, with every certificate re-verified.

Example:
    python scripts/realizability_scaling.py --p-max 9 --per-size 5
"""

import argparse
import random
import time

from taildep.instances import (
    pair_matrix_from_beta,
    random_unit_margin_beta,
    violate_triangle,
)
from taildep.realize import decide_tdr, verify_certificate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-min", type=int, default=3)
    ap.add_argument("--p-max", type=int, default=8)
    ap.add_argument("--per-size", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    print(f"{'p':>3} {'cols':>6} {'feasible avg':>13} {'infeasible avg':>15}")
    for p in range(args.p_min, args.p_max + 1):
        t_feas = t_infeas = 0.0
        for _ in range(args.per_size):
            L = pair_matrix_from_beta(random_unit_margin_beta(p, rng))
            t0 = time.perf_counter()
            out = decide_tdr(L, max_p=p)
            t_feas += time.perf_counter() - t0
            assert out.feasible and verify_certificate(out, L)

            bad = violate_triangle(L, rng)
            t0 = time.perf_counter()
            out_bad = decide_tdr(bad, max_p=p)
            t_infeas += time.perf_counter() - t0
            assert not out_bad.feasible and verify_certificate(out_bad, bad)
        print(
            f"{p:>3} {2**p - 1:>6} {t_feas / args.per_size:>12.3f}s "
            f"{t_infeas / args.per_size:>14.3f}s"
        )


if __name__ == "__main__":
    main()
