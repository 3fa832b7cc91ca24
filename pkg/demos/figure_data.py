"""Regenerate the comparison data: L2 star of S* vs symmetrized van der Corput,
and the star discrepancy of S* vs van der Corput, with a text summary.

Usage: python3 figure_data.py [n_max] [out.csv]
"""

import math
import sys

from greedyl2.cli import compare_rows, monitored_metrics

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 600
rows = compare_rows(n_max)

if len(sys.argv) > 2:
    with open(sys.argv[2], "w") as fh:
        fh.write("N,L2star_S*,L2star_symvdc,Dstar_S*,Dstar_vdc\n")
        for r in rows:
            fh.write(",".join(map(str, r)) + "\n")

wins = sum(r[1] < r[2] for r in rows)
print(f"L2(S*) < L2(sym vdC) for {wins} of {len(rows)} values of N")
for N in (10, 100, n_max):
    r = rows[N - 1]
    print(f"N={N:5d}  L2 S*={r[1]:.4f} symvdC={r[2]:.4f}  D*/logN S*={r[3] / math.log(N):.4f} vdC={r[4] / math.log(N):.4f}")
for name, value in monitored_metrics(rows).items():
    print(f"{name}: {value}")
