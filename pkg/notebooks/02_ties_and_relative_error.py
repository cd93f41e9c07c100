"""
Breaking ties between equal fractional parts
============================================

When two entries share a fractional part, any choice among them gives
the same absolute error. The relative error sum_i |m_i - x_i|^q / x_i^q
does care. Rounding the larger entry up is cheaper when the fraction is
at most one half; above one half the smaller entry should go up.
"""
import numpy as np

from sumround import oric_round, oric_round_ceiling_init, relative_error_sum
from sumround.oracle import brute_force_best_relative, brute_force_optima

# Fractions 0.4 tie; one of the two must go up.
x = np.array([0.4, 2.4, 0.2])
print("absolute optima:", [a.tolist() for a in brute_force_optima(x).argmins])
m = oric_round(x)
print("chosen:", m.tolist(), "relative error:", relative_error_sum(x, m, q=1))
print("oracle best relative:", brute_force_best_relative(x, q=1).tolist())

# Fractions 0.6 tie; now the smaller entry is the better one to raise.
y = np.array([0.6, 2.6, 0.8])
for cand in ([1, 2, 1], [0, 3, 1]):
    print(cand, "relative error:", round(relative_error_sum(y, np.array(cand), q=1), 4))
print("chosen:", oric_round(y).tolist())

# Starting from the ceilings and rounding down gives the same vectors.
rng = np.random.default_rng(1)
agree = 0
for _ in range(1000):
    z = rng.integers(1, 60, 6) / 10
    z = np.append(z, (10 - round(z.sum() * 10) % 10) % 10 / 10 + 1)
    agree += oric_round(z) == oric_round_ceiling_init(z)
print("ceiling start agrees on", agree, "of 1000 tied instances")
