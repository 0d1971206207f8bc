"""Sweep the edge residues of every class over a ball of pointed edges and
cross-check each table against the sampling oracle.

Usage: python scripts/sweep_lambda.py --p 2 --d 1 [--radius 2] [--seed 0]
"""

import argparse
import random
import sys
import time

from drinfeld.building import Ball, Lattice
from drinfeld.projpoints import enumerate_points
from drinfeld.residues import oracle_slope_table, slope


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, required=True)
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--radius", type=int, default=2)
    parser.add_argument("--e-oracle", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    classes = enumerate_points(args.p, 1, args.d)
    edges = Ball(Lattice.standard(args.p, args.d), args.radius).pointed_edges()
    print(f"p={args.p} d={args.d}: {len(edges)} pointed edges, "
          f"{len(classes)} classes")

    started = time.monotonic()
    disagreements = 0
    for index, sigma in enumerate(edges):
        comb = {x: slope(x, sigma) for x in classes}
        orc = oracle_slope_table(sigma, classes, e_oracle=args.e_oracle,
                                 rng=rng, check_membership=False)
        offsets = {comb[x] - orc[x] for x in classes}
        if len(offsets) != 1:
            disagreements += 1
            print(f"  DISAGREEMENT on edge {index}: {sigma.to_json()}")
    elapsed = time.monotonic() - started
    print(f"swept {len(edges)} edges in {elapsed:.1f}s: "
          f"{disagreements} disagreements")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
