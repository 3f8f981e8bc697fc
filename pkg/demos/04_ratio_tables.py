"""
Approximation ratios and the energy tradeoff
============================================

The guarantee depends on ``alpha`` and ``gamma``. Optimising ``alpha`` with
no spare energy gives the ratio table; allowing extra energy lets ``gamma``
shrink and the ratio fall.
"""

from mrenergy import ratios

print("beta  general  no-precedence  no-precedence-no-release")
for beta in ratios.TABLE_BETAS:
    row = [ratios.optimal_ratio(beta, v)[1] for v in ratios.VARIANTS]
    print(f"{beta:4.1f}  " + "  ".join(f"{r:7.2f}" for r in row))

print()
for beta in ratios.FIGURE_BETAS:
    curve = ratios.tradeoff_curve(beta, [0, 25, 50, 100])
    print(f"beta={beta}: " + ", ".join(f"+{pct:.0f}% -> {r:.2f}" for r, pct in curve))
