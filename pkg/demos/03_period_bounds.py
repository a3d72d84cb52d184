"""Period floors: why invariant schedules cannot be short.

Any set with throughput that is invariant under all shifts must have a
period divisible by the product of its duty-factor denominators, and by
a divisor for every user subset.  The array construction meets the full
product exactly, so it is optimal whenever the factors are in lowest
terms.
"""

import itertools

from protoseq import as_duty_factors, construct_si, min_period_bound, si_divisibility

DUTY_LISTS = [
    ("2/3", "1/3", "1/3"),
    ("1/2", "1/3", "1/5"),
    ("1/2", "1/2", "1/2", "1/2"),
    ("9/10", "7/8", "1/2"),
    ("1/5", "1/5", "1/5"),
]

for spec in DUTY_LISTS:
    duty = as_duty_factors(spec)
    k = len(duty)
    bound = min_period_bound(duty)
    built = construct_si(duty)
    print(f"duty {', '.join(map(str, duty))}:")
    print(f"  bound = {bound}, built period = {built.period}")
    worst = max(
        si_divisibility(duty, users)
        for m in range(1, k + 1)
        for users in itertools.combinations(range(1, k + 1), m)
    )
    print(f"  largest subset divisor = {worst}; "
          f"period % divisor == 0 for all {2 ** k - 1} subsets")
    assert built.period == bound
    print()

print("the bound grows as the product of denominators, so invariance")
print("costs an exponentially long period as the user count grows.")
