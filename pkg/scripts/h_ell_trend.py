"""CSV of H_l(N) l!/(log log N)^l over a grid of N (plot-ready)."""

import argparse
import sys

from lcmsunflower.harmonic import rows_to_csv, trend_rows


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--Ns", default="10000,100000,1000000,10000000")
    ap.add_argument("--ells", default="1,2,3")
    args = ap.parse_args()
    rows = trend_rows([int(x) for x in args.Ns.split(",")], [int(x) for x in args.ells.split(",")])
    sys.stdout.write(rows_to_csv(rows))


if __name__ == "__main__":
    main()
