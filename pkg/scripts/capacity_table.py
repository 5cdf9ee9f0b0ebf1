"""Exact F_k(n) for small n and the capacity lower bound each value certifies."""

import argparse

from lcmsunflower.capacity import capacity_lower_estimate, known_bounds, max_sunflower_free


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--ks", default="3,4,5")
    ap.add_argument("--n-max", type=int, default=5)
    args = ap.parse_args()
    for k in (int(x) for x in args.ks.split(",")):
        b = known_bounds(k)
        print(f"k={k}  known bounds on the capacity: [{b.lower}, {b.upper:.9f}]")
        for n in range(args.n_max + 1):
            res = max_sunflower_free(n, k)
            est = capacity_lower_estimate(res) if n and res.exact else float("nan")
            print(f"  n={n}  F={res.F_value:<4d} exact={res.exact!s:5s} nodes={res.nodes_explored:<8d} est={est:.4f}")


if __name__ == "__main__":
    main()
