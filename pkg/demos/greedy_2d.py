"""Greedy point sets in the unit square for the three L2 kinds.

The minimization is a grid search, so every step is checked against the
cube average of the one-step increase; the realized increases are shown.
"""

import numpy as np

from greedyl2.discrepancy import l2_sq
from greedyl2.greedy import SearchConfig, averaging_bound, greedy_nd

cfg = SearchConfig(grid_resolution=32)
for kind in ("star-l2", "extreme-l2", "periodic-l2"):
    trace = []
    pts = greedy_nd(kind, None, 64, cfg, trace=trace, dim=2)
    inc = np.array([t["increase"] for t in trace])
    print(f"{kind:12s} L2^2/N at N=64: {l2_sq(kind, pts) / 64:.5f}  "
          f"largest step {inc.max():.5f} <= bound {averaging_bound(kind, 2):.5f}")
    print("  first points:", [tuple(round(c, 4) for c in p) for p in pts[:6]])
