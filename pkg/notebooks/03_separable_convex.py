"""
Rounding a relaxed optimum of a separable convex objective
==========================================================

Given a continuous minimizer x* with integer sum, rank the components by
the marginal cost phi_i(ceil) - phi_i(floor) and round up the cheapest.
"""
import numpy as np

from sumround import RelaxedSolution, SeparableObjective, marginal_costs, round_separable
from sumround.oracle import brute_force_separable

rng = np.random.default_rng(3)
x = rng.uniform(0, 5, 6)
x[-1] += np.ceil(x.sum()) - x.sum()
relaxed = RelaxedSolution.from_values(x)
weights = rng.uniform(0.1, 10, 6)

objective = SeparableObjective.weighted_power(relaxed.values, weights)
print("relaxed:", np.round(relaxed.values, 3), "target:", relaxed.target)
print("marginal costs:", np.round(marginal_costs(objective, relaxed), 3))

m = round_separable(objective, relaxed)
best = brute_force_separable(objective, relaxed.values)
print("rounded:", m.tolist(), "objective:", objective(m.values))
print("exhaustive minimum:", best.min_value)

# Any convex one-variable functions work, not just powers.
costs = SeparableObjective([
    lambda u: np.exp(u - 1.3),
    lambda u: (u - 0.9) ** 4,
    lambda u: abs(u - 2.8),
])
print("custom:", round_separable(costs, [1.3, 0.9, 2.8], check_convexity=True).tolist())
