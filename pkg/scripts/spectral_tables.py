#!/usr/bin/env python3
"""Print the spectral decompositions of the normalized R matrices.

Solves the intertwiner systems exactly and tabulates the eigenvalue
function of every classical component next to its closed form, for the
four sign pairs (type c) and a few fundamental pairs (type d).
"""

import sys
import time

sys.path.insert(0, "src")

from qosc.rmatrix import (
    closed_rho_c,
    closed_rho_d,
    make_c_pair,
    make_d_pair,
    rho_pole_multisets,
    solve_R,
)

NAMES = ("z", "z2")


def table_c(m=2, cutoff=6):
    for sigma in [("+", "+"), ("-", "-"), ("+", "-"), ("-", "+")]:
        t0 = time.time()
        pair = make_c_pair(m, sigma, cutoff=cutoff, level="bold")
        rho, _ = solve_R(pair)
        print("\ntype c, sigma = (%s,%s), m = %d   [%.1fs]" % (*sigma, m, time.time() - t0))
        for key in sorted(rho):
            closed = closed_rho_c(sigma, key)
            mark = "ok" if rho[key] == closed else "MISMATCH"
            print("  %-8s rho = %s   [%s]" % (key, rho[key].to_str(NAMES), mark))


def table_d(m=2):
    for (l1, l2, cutoff) in [(1, 1, 6), (1, 2, 7)]:
        t0 = time.time()
        pair = make_d_pair(m, l1, l2, cutoff=cutoff, level="underline")
        rho, _ = solve_R(pair)
        print("\ntype d, (l1,l2) = (%d,%d), m = %d   [%.1fs]" % (l1, l2, m, time.time() - t0))
        pm = rho_pole_multisets(rho, 40)
        for key in sorted(rho):
            closed = closed_rho_d(l1, l2, *key)
            mark = "ok" if rho[key] == closed else "MISMATCH"
            print(
                "  (r,s)=%-6s rho = %s   poles %s  [%s]"
                % (key, rho[key].to_str(NAMES), pm[key][0], mark)
            )


if __name__ == "__main__":
    table_c()
    table_d()
