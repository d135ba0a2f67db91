#!/usr/bin/env python3
"""Print the density-exponent constants and thresholds over a (q, k) grid.

Usage: python scripts/bound_table.py [-n N]
"""

import argparse

from ffsets import c_main, c_prime, digit_sum, theorem_threshold


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=16, help="dimension for thresholds")
    args = ap.parse_args()

    print(f"{'q':>3} {'k':>3} {'D_q(k)':>7} {'c(k,q)':>12} {'c\'(k,q)':>12} "
          f"{'2q^((1-c)n)':>14}  (n = {args.n})")
    for q in (2, 3, 4, 5, 7, 8, 9):
        for k in range(2, 13):
            thr = theorem_threshold("thm1", q, args.n, k)
            print(f"{q:>3} {k:>3} {digit_sum(k, q):>7} {c_main(k, q):>12.6g} "
                  f"{c_prime(k, q):>12.6g} {thr:>14.6g}")
        print()


if __name__ == "__main__":
    main()
