"""Run the certification bundle and write it to a JSON file.

Usage: python scripts/run_certify.py [--p P] [--d D] [--seed S] [--out FILE]
"""

import argparse
import json
import sys
import time

from drinfeld.certify import run_all


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, help="restrict to this prime")
    parser.add_argument("--d", type=int, help="restrict to this dimension")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="certify_bundle.json")
    args = parser.parse_args()

    started = time.monotonic()
    bundle = run_all(
        ps=None if args.p is None else {args.p},
        ds=None if args.d is None else {args.d},
        seed=args.seed,
    )
    elapsed = time.monotonic() - started

    with open(args.out, "w") as fh:
        json.dump(bundle, fh, indent=1)
        fh.write("\n")

    for rec in bundle["criteria"]:
        print(f"criterion {rec['criterion']:2d} {rec['name']:32s} "
              f"{'PASS' if rec['pass'] else 'FAIL'}")
    print(f"wrote {args.out} in {elapsed:.1f}s; "
          f"{'all PASS' if bundle['all_pass'] else 'FAILURES PRESENT'}")
    return 0 if bundle["all_pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
