#!/usr/bin/env python3
"""Change of renormalization points: evaluate both sides of the
contracted-graph counterterm formula on the fish and the dunce's cap."""

import argparse

from graphrenorm import fixtures as fx
from graphrenorm.bump import BumpSpec
from graphrenorm.charts import chart_for
from graphrenorm.lattice import divergent_lattice, irreducibles
from graphrenorm.mc import MCParams
from graphrenorm.renorm import rg_check


def chart_of(graph, members):
    return chart_for(irreducibles(divergent_lattice(graph)), members)


def run(name, chart, r1, r2, mc):
    nu = {g: BumpSpec(r1, kind="subtraction_nu") for g in chart.nested}
    nup = {g: BumpSpec(r2, kind="subtraction_nu") for g in chart.nested}
    rep = rg_check(chart, nu, nup, BumpSpec(2.0), mc)
    print(f"{name}: lhs {rep.lhs.value:10.4f} +/- {rep.lhs.stderr:8.4f}   "
          f"rhs {rep.rhs.value:10.4f} +/- {rep.rhs.stderr:8.4f}   "
          f"passed={rep.passed}")
    for term in rep.terms:
        print(f"    K={term.subset} sign={term.sign:+d} "
              f"c={term.coefficient.value:.4f} T={term.pairing.value:.4f}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=float, default=1e6)
    parser.add_argument("--batches", type=int, default=40)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--r1", type=float, default=0.8)
    parser.add_argument("--r2", type=float, default=1.2)
    args = parser.parse_args()
    mc = MCParams(samples=int(args.samples), batches=args.batches,
                  seed=args.seed)

    fish = fx.fish()
    run("fish ", chart_of(fish, [fish.full()]), args.r1, args.r2, mc)

    dunce = fx.dunce_cap()
    run("dunce", chart_of(dunce, [dunce.subgraph({2, 3}), dunce.full()]),
        args.r1, args.r2, mc)


if __name__ == "__main__":
    main()
