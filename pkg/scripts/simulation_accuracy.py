#!/usr/bin/env python3
"""Finite-threshold bias and Monte-Carlo accuracy of the coefficient estimators.

For a target subset L, u * P[min over L > u] converges to lambda(L) with an
O(1/u) gap; the table below makes that visible and compares the empirical
estimate against the closed form at each threshold.

Example:
    python scripts/simulation_accuracy.py --n 1000000 --seed 7
"""

import argparse

from taildep import exact_joint_exceedance, labels_of, sample
from taildep.instances import line_fixture_model
from taildep.simulate import estimate_lambda
from taildep.subsets import mask_of


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--subset", default="1,3", help="target components, e.g. 1,3")
    args = ap.parse_args()

    model = line_fixture_model()
    mask = mask_of(*(int(t) for t in args.subset.split(",")))
    lam = float(model.lambda_of(mask))
    xs = sample(model, args.n, seed=args.seed)

    print(f"target lambda({set(labels_of(mask))}) = {lam}")
    print(
        f"{'u':>8} {'u*P_exact':>11} {'gap':>9} {'gap*u':>8} "
        f"{'empirical':>11} {'|dev|/SE':>9}"
    )
    u = 12.5
    while u <= 1600:
        exact = u * exact_joint_exceedance(model, mask, u)
        row = estimate_lambda(model, xs, mask, u)
        dev = row.deviation_in_se() if row.std_error else 0.0
        print(
            f"{u:>8.1f} {exact:>11.5f} {exact - lam:>9.5f} "
            f"{(exact - lam) * u:>8.3f} {row.empirical:>11.5f} {dev:>9.2f}"
        )
        u *= 2
    print("\ngap*u settling to a constant confirms the O(1/u) bias rate;")
    print("|dev|/SE is the Monte-Carlo deviation in standard errors.")


if __name__ == "__main__":
    main()
