"""Exact f_k(N) for N = 1..N_max, with the excluded elements of the optimal set."""

import argparse
import time

from lcmsunflower.lcmfree import exact_fk


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--N-max", type=int, default=40)
    args = ap.parse_args()
    print(f"{'N':>3} {'f_k(N)':>12} {'nodes':>9} {'sec':>7}  excluded")
    for N in range(1, args.N_max + 1):
        t0 = time.perf_counter()
        res = exact_fk(N, args.k)
        dt = time.perf_counter() - t0
        kept = set(res.optimal_set)
        excluded = [a for a in range(1, N + 1) if a not in kept]
        print(f"{N:>3} {float(res.value):>12.8f} {res.nodes:>9} {dt:>7.2f}  {excluded}")


if __name__ == "__main__":
    main()
