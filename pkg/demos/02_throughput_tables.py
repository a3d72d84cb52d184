"""Symmetric throughput across user counts, and the best duty factor.

With a common duty factor f, the per-user throughput has a single
closed form, so system-level curves come straight from evaluating it.
At capability 1 the optimum sits at f = 1/K; for larger capabilities
there is no simple expression and the optimizer scans a grid.
"""

from protoseq import curve_csv, optimal_duty, throughput_curve

print("system throughput for f = 1/10 and 1/20, users 10..50:")
rows = throughput_curve(range(10, 51, 10), [1, 5, 10], ["1/10", "1/20"])
print(curve_csv(rows))

print("best common duty factor for 20 users:")
print(f"  {'gamma':>5}  {'f*':>9}  {'per-user value':>15}  nearest simple rational")
for gamma in (1, 2, 3, 5, 8, 10, 12, 15):
    res = optimal_duty(20, gamma, resolution=1e-4)
    print(
        f"  {gamma:>5}  {res.f_star:>9.5f}  {res.value:>15.9f}  "
        f"{res.rational_f} -> {float(res.rational_value):.9f}"
    )

print("\nsanity anchor: K=20, gamma=1 peaks at 1/20:")
res = optimal_duty(20, 1, resolution=1e-4)
print(f"  f* = {res.f_star:.5f}, exact rescoring picks {res.rational_f}")
