#!/usr/bin/env python3
"""Survey extremal avoiding sets over a small instance grid.

For each (q, n, k): search for a maximum avoiding set, then confirm the
rank identity rank(M) = |A| against the witness polynomial and compare
|A| with the closed-form bound (reporting vacuity at desk scale).

Usage: python scripts/extremal_survey.py [--budget B] [--quick]
"""

import argparse
import time

from ffsets import (AvoidanceInstance, build_witness, difference_matrix,
                    field_from_q, hoeffding_bound, kth_power_map,
                    max_avoiding_exhaustive, rank_gf, verify_avoiding)

FULL_GRID = ([(2, n, 3) for n in range(2, 11)]
             + [(2, n, 5) for n in range(2, 11)]
             + [(3, n, 2) for n in range(2, 7)]
             + [(3, n, 4) for n in range(2, 7)]
             + [(5, n, 2) for n in range(2, 5)])
QUICK_GRID = [(2, n, 3) for n in range(2, 9)] + [(3, n, 2) for n in range(2, 5)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=100_000_000)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()

    grid = QUICK_GRID if args.quick else FULL_GRID
    print(f"{'q':>2} {'n':>3} {'k':>2} {'m':>2} {'d':>2} {'|A|':>5} {'opt':>5} "
          f"{'rank=|A|':>8} {'bound':>12} {'vac':>4} {'nodes':>11} {'sec':>7}")
    for q, n, k in grid:
        f = field_from_q(q)
        phi = kth_power_map(f, n, k)
        inst = AvoidanceInstance.from_map(phi)
        t0 = time.time()
        res = max_avoiding_exhaustive(inst, budget=args.budget)
        dt = time.time() - t0
        assert verify_avoiding(res.best_set, inst)
        rep = build_witness(phi)
        rank = rank_gf(difference_matrix(rep.polynomial(), res.best_set).entries, f)
        bound = hoeffding_bound(q, n, phi.m, phi.degree)
        vac = bound >= q ** n
        print(f"{q:>2} {n:>3} {k:>2} {phi.m:>2} {phi.degree:>2} "
              f"{res.best_size:>5} {str(res.optimal):>5} "
              f"{str(rank == res.best_size):>8} {bound:>12.4g} "
              f"{'yes' if vac else 'no':>4} {res.nodes_explored:>11} {dt:>7.2f}")


if __name__ == "__main__":
    main()
