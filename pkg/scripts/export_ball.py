"""Export a ball around the standard vertex as JSON-lines and optionally a
DOT graph.

Usage: python scripts/export_ball.py --p 2 --d 1 --radius 3 [--dot ball.dot]
"""

import argparse
import json
import sys

from drinfeld.building import Ball, Lattice


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, required=True)
    parser.add_argument("--d", type=int, required=True)
    parser.add_argument("--radius", type=int, required=True)
    parser.add_argument("--out", default=None, help="JSON-lines file "
                        "(default stdout)")
    parser.add_argument("--dot", default=None, help="also write a DOT graph")
    args = parser.parse_args()

    ball = Ball(Lattice.standard(args.p, args.d), args.radius)
    lines = [json.dumps(rec) for rec in ball.to_json()]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {len(lines)} vertices to {args.out}", file=sys.stderr)
    else:
        print("\n".join(lines))

    if args.dot:
        names = {
            lat: ";".join(",".join(str(c) for c in row) for row in lat.rows)
            for lat in ball.vertices
        }
        with open(args.dot, "w") as fh:
            fh.write("graph ball {\n")
            for a, b in ball.edges():
                fh.write(f'  "{names[a]}" -- "{names[b]}";\n')
            fh.write("}\n")
        print(f"wrote {len(ball.edges())} edges to {args.dot}",
              file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
