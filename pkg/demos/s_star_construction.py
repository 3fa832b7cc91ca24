"""Build the star-greedy sequence step by step and watch its structure.

Each new element is the smallest minimizer of f_N over the centred grid
(2k-1)/(2(N+1)), so it always has denominator dividing 2(N+1).
"""

from fractions import Fraction

from greedyl2.discrepancy import DiscrepancyKind, l2_star_sq
from greedyl2.greedy import GreedyState, argmin_star_1d, eval_star_objective, greedy_star_1d

state = GreedyState(DiscrepancyKind.STAR_L2, [Fraction(1, 2)])
print(" N  next      ties  L2*^2/N")
for _ in range(15):
    ties = argmin_star_1d(state)
    state.add(ties[0])
    print(f"{state.N - 1:2d}  {str(ties[0]):8s}  {len(ties):4d}  {float(state.current_sq) / state.N:.5f}")

# at N = 12 the minimum beats the runner-up by only about 0.003
s12 = GreedyState(DiscrepancyKind.STAR_L2, greedy_star_1d(None, 12))
for x in (Fraction(23, 26), Fraction(17, 26)):
    print(f"f_12({x}) = {eval_star_objective(s12, x)} ~ {float(eval_star_objective(s12, x)):.6f}")

seq = greedy_star_1d(None, 500)
print("L2*^2 / N at N=500:", float(l2_star_sq(seq)) / 500, "(never above 1/6)")
