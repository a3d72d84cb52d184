"""Shift experiment: scheduled invariance against memoryless access.

Each run drops every user at an independent uniform shift.  A
shift-invariant schedule set returns the same per-user throughput on
every single run; a random-access scheme with the same duty factors
matches it only on average, with a spread that shrinks as the
measurement horizon grows.
"""

from fractions import Fraction

from protoseq import SimConfig, construct_si, run_monte_carlo, symmetric_throughput

K, GAMMA, RUNS = 4, 2, 20_000
sset = construct_si([Fraction(1, K)] * K)
expected = symmetric_throughput(Fraction(1, K), K, GAMMA)
print(f"{K} users at duty 1/{K}, capability {GAMMA}; "
      f"closed-form per-user throughput = {expected} = {float(expected):.6f}")

protocol = run_monte_carlo(sset, SimConfig(gamma=GAMMA, runs=RUNS, seed=7))
stats = protocol.per_user[0]
print(f"\nscheduled ({RUNS} random-shift runs, user 1):")
print(f"  min = mean = max = {stats.minimum}  "
      f"(zero variance: {stats.minimum == stats.maximum})")

print(f"\nrandom access at the same duty factor (user 1):")
print(f"  {'horizon':>8}  {'min':>9}  {'mean':>9}  {'max':>9}  {'spread':>9}")
for horizon in (1, 10, 100):
    result = run_monte_carlo(
        sset,
        SimConfig(gamma=GAMMA, runs=RUNS, seed=100 + horizon,
                  horizon=horizon, scheme="random_access"),
    )
    u = result.per_user[0]
    print(
        f"  {horizon:>8}  {float(u.minimum):>9.5f}  {float(u.mean):>9.5f}  "
        f"{float(u.maximum):>9.5f}  {float(u.maximum - u.minimum):>9.5f}"
    )

print("\nthe mean matches the closed form either way; only the schedule")
print("removes the spread entirely, on every horizon.")
