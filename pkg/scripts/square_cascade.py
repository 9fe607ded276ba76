#!/usr/bin/env python3
# Random squares of delta_inv-images never vanish for nonzero input, and the
# elimination cascade certifies it symbolically for the chosen homogeneity.
import argparse
import pathlib
import random
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fedosov.twodim import cascade_solve, random_table, square_check
from fedosov.weyl import format_series


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--z", type=int, default=5, help="homogeneity parameter")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--show-square", action="store_true",
                    help="print the full square of the first trial")
    args = ap.parse_args()
    if args.z < 1:
        ap.error("--z must be >= 1")

    rng = random.Random(args.seed)
    for n in range(args.trials):
        table = random_table(args.z, rng)
        res = square_check(table.to_form())
        tag = "zero!" if res.is_zero else f"witness {res.witness.hbar},{res.witness.fiber}"
        print(f"trial {n}: {len(table.items())} table entries, square {tag}")
        if n == 0 and args.show_square:
            print(f"  square = {format_series(res.square)}")

    print(cascade_solve(args.z).describe())


if __name__ == "__main__":
    main()
