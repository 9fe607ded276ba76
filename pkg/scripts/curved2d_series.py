#!/usr/bin/env python3
"""Grade-by-grade correction series for the constant-coefficient curved
2D connection, plus the closure-system evidence that it never terminates."""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from fedosov.abelian import abelian_r, check_abelian, finiteness_test
from fedosov.geometry import ConnectionSpec, ManifoldSpec, curvature_form
from fedosov.weyl import format_series


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--degree", type=int, default=8, help="top grade to compute")
    args = ap.parse_args()
    if args.degree < 4:
        ap.error("--degree must be >= 4")

    m = ManifoldSpec.standard(2)
    c = ConnectionSpec(2, [((1, 1, 1), 1), ((2, 2, 2), 1)])
    print(f"curvature: {format_series(curvature_form(m, c))}")

    r = abelian_r(m, c, args.degree)
    for z in range(3, args.degree + 1):
        print(f"r[{z}] = {format_series(r.part(z))}")

    rep = check_abelian(r)
    print(f"defining equation residual zero through grade {rep.checked_through}: {rep.ok}")

    print("closure system for a hypothetical top degree m:")
    for mp in range(4, args.degree + 1):
        res = finiteness_test(r, mp)
        status = "consistent" if res.consistent else f"violated at z={res.first_violated}"
        print(f"  m={mp}: {status}")
    print("every candidate m fails, so the series runs on forever")


if __name__ == "__main__":
    main()
