"""The periodic and extreme greedy sequences started at 0 are van der Corput.

Also shows the minimizers of G_N that drive the argument: for N a power of
two they form the shifted grid, for odd N they are a single point phi(N).
"""

from greedyl2.discrepancy import DiscrepancyKind
from greedyl2.greedy import greedy_periodic_1d
from greedyl2.sequences import van_der_corput_prefix
from greedyl2.verify import argmin_G

for N in (16, 256, 1024):
    vdc = van_der_corput_prefix(N).values()
    per = greedy_periodic_1d(None, N).values()
    ext = greedy_periodic_1d(None, N, kind=DiscrepancyKind.EXTREME_L2).values()
    print(f"N={N:5d}: periodic == vdC {per == vdc}, extreme == vdC {ext == vdc}")

for N in range(1, 13):
    print(f"argmin G_{N}:", ", ".join(map(str, argmin_G(N))))
