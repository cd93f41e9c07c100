"""
Rounding a vector while keeping its sum
=======================================

Rounding each entry on its own can change the total. Sorting by
fractional part and rounding up just enough entries keeps the total and
minimizes every L^q error at once.
"""
import numpy as np

from sumround import decompose_values, error_report, oric_order, oric_round, shortfall
from sumround.oracle import brute_force_optima

x = np.array([2.25, 3.4, 4.35])
print("values:", x, "sum:", x.sum())

# Naive rounding drops a unit.
print("np.rint:", np.rint(x).astype(int), "sum:", int(np.rint(x).sum()))

# Floors sum to 9, so one entry has to go up.
dec = decompose_values(x, 1e-9)
print("floors:", dec.floors, "shortfall:", shortfall(dec, 10))
print("rounding order:", oric_order(dec))

m = oric_round(x)
print("rounded:", m.tolist(), "sum:", m.target)

# The same vector wins for every exponent; the exhaustive search agrees.
for q in (1, 2, 3, 7.5):
    best = brute_force_optima(x, q=q)
    print(f"q={q}: error {error_report(x, m, q).lq_error:.6f}, "
          f"oracle {best.min_value:.6f}, argmins {[a.tolist() for a in best.argmins]}")

# Large inputs are cheap.
rng = np.random.default_rng(0)
big = rng.uniform(0, 10, 1_000_000)
big[0] += np.ceil(big.sum()) - big.sum()
out = oric_round(big)
print("1e6 entries, max |m - x|:", np.abs(out.values - big).max())
