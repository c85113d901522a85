#!/usr/bin/env python3
"""Monte Carlo periods of the primitive fixtures and the dunce leading
Laurent coefficient, with the analytic fish value for reference."""

import argparse
import math

from graphrenorm import fixtures as fx
from graphrenorm.mc import MCParams
from graphrenorm.renorm import leading_coefficient, period


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=float, default=2e6)
    parser.add_argument("--batches", type=int, default=40)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    mc = MCParams(samples=int(args.samples), batches=args.batches,
                  seed=args.seed)

    fish = period(fx.fish(), mc)
    print(f"P(fish) = {fish.value:.6f} +/- {fish.stderr:.6f}   "
          f"(analytic -pi^2/2 = {-math.pi ** 2 / 2:.6f})")

    k4 = period(fx.k_complete(4), mc)
    print(f"P(K4)   = {k4.value:.6f} +/- {k4.stderr:.6f}")

    lead = leading_coefficient(fx.dunce_cap(), mc)
    print(f"dunce leading coefficient = {lead.value:.5f} "
          f"+/- {lead.stderr:.5f}   (pi^4/4 = {math.pi ** 4 / 4:.5f})")

    lead11 = leading_coefficient(fx.two_sided_bubbles(1, 1), mc)
    print(f"two-sided bubble leading  = {lead11.value:.5f} "
          f"+/- {lead11.stderr:.5f}   (-pi^6/8 = {-math.pi ** 6 / 8:.5f})")


if __name__ == "__main__":
    main()
