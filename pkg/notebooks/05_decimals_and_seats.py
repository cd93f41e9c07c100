"""
Percentages that add up, and seats per party
============================================

Rounding shares to k decimals is the same problem on a 10^-k grid.
Largest-remainder apportionment is the same problem on seat quotas.
"""
from sumround import apportion, decimal_round

shares = ["0.333", "0.333", "0.334"]
print(shares, "->", decimal_round(shares, k=1).to_strings())

# Percentages of a pie chart, two decimals, total stays 100.00.
pct = [100 / 7] * 7
out = decimal_round(pct, k=2)
print(out.to_strings(), "total", out.total)

votes = [47000, 16000, 15800, 12000, 6100, 3100]
print("seats:", apportion(votes, 10).tolist())
print("votes x7:", apportion([7 * v for v in votes], 10).tolist())
