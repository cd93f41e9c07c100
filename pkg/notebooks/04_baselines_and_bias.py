"""
Fixed-threshold and randomized rounding
=======================================

A fixed threshold ignores the total. Randomized rounding matches it only
sometimes and, conditioned on the optimum, is biased: entries the
optimum rounds up sit below it on average, the rest sit above.
"""
import numpy as np

from sumround import fractional_round, oric_round
from sumround.methods import exact_distribution, feasible_threshold, monte_carlo_report, sorted_bias_pattern

x = [2.25, 3.4, 4.35]
out = fractional_round(x, 0.5)
print("threshold 0.5:", out.allocation.tolist(), "sum deviation:", out.sum_deviation)

t = feasible_threshold(x)
print("a threshold that works:", t, "->", fractional_round(x, t).allocation.tolist())

fracs = [0.4, 0.35, 0.25]
d = exact_distribution(fracs)
print("P(sum kept):", round(d.feasibility_probability, 4))
print("P(optimum):", round(d.optimality_probability, 4))
print("P(not optimal | sum kept):", round(d.conditional_non_optimality, 4))
print("expected wrong round-ups:", round(d.expected_wrong_roundups, 4))

report = monte_carlo_report(fracs, trials=100_000, seed=7)
print("simulated rates:", report.feasibility_rate, report.optimality_rate)

y = np.array([3.9, 0.7, 1.5, 2.3, 0.6])
print("optimum:", oric_round(y).tolist())
print("bias by rounding order:", sorted_bias_pattern(y))
