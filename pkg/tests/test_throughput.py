import itertools
import random
from fractions import Fraction

import pytest

from protoseq import (
    BudgetExceededError,
    as_duty_factors,
    consistency_check,
    curve_csv,
    optimal_duty,
    symmetric_throughput,
    throughput_curve,
    ti_throughput,
)

WORKED = ("2/3", "1/3", "1/3")


def subset_sum_oracle(duty, gamma):
    """Direct subset enumeration of the closed form, kept independent of
    the polynomial evaluation in the package."""
    duty = as_duty_factors(duty)
    K = len(duty)
    out = []
    for i in range(K):
        others = [j for j in range(K) if j != i]
        total = Fraction(0)
        for r in range(gamma):
            for chosen in itertools.combinations(others, r):
                term = Fraction(1)
                for j in chosen:
                    term *= duty[j]
                for k in others:
                    if k not in chosen:
                        term *= 1 - duty[k]
                total += term
        out.append(duty[i] * total)
    return tuple(out)


def test_worked_example_values():
    assert ti_throughput(WORKED, 1).per_user == (
        Fraction(8, 27),
        Fraction(2, 27),
        Fraction(2, 27),
    )
    assert ti_throughput(WORKED, 2).per_user == (
        Fraction(16, 27),
        Fraction(7, 27),
        Fraction(7, 27),
    )


def test_zero_duty_user_gets_zero():
    report = ti_throughput(("0/1", "1/2", "1/3"), 2)
    assert report.per_user[0] == 0


def test_gamma_validation():
    with pytest.raises(ValueError):
        ti_throughput(WORKED, 0)
    with pytest.raises(ValueError):
        ti_throughput(WORKED, 3)
    with pytest.raises(ValueError):
        symmetric_throughput(Fraction(1, 2), 3, 3)


def test_matches_subset_enumeration_oracle():
    rng = random.Random(61)
    for _ in range(30):
        k = rng.randint(2, 6)
        duty = [Fraction(rng.randint(0, 4), 4) for _ in range(k)]
        gamma = rng.randint(1, k - 1)
        assert ti_throughput(duty, gamma).per_user == subset_sum_oracle(duty, gamma)


def test_symmetric_values():
    assert symmetric_throughput(Fraction(1, 3), 3, 2) == Fraction(8, 27)
    assert symmetric_throughput(Fraction(0), 5, 2) == 0
    assert symmetric_throughput(Fraction(1), 5, 4) == 0


def test_symmetric_reduction():
    rng = random.Random(67)
    for _ in range(30):
        k = rng.randint(2, 7)
        f = Fraction(rng.randint(0, 5), 5)
        gamma = rng.randint(1, k - 1)
        report = ti_throughput([f] * k, gamma)
        expected = symmetric_throughput(f, k, gamma)
        assert all(r == expected for r in report.per_user)


def test_monotone_in_gamma():
    rng = random.Random(71)
    for _ in range(20):
        k = rng.randint(3, 6)
        duty = [Fraction(rng.randint(1, 6), 6) for _ in range(k)]
        values = [ti_throughput(duty, g).per_user for g in range(1, k)]
        for a, b in zip(values, values[1:]):
            assert all(x <= y for x, y in zip(a, b))


def test_bounded_by_duty_factor():
    rng = random.Random(73)
    for _ in range(30):
        k = rng.randint(2, 6)
        duty = [Fraction(rng.randint(0, 7), 7) for _ in range(k)]
        gamma = rng.randint(1, k - 1)
        for f, r in zip(duty, ti_throughput(duty, gamma).per_user):
            assert 0 <= r <= f
    # equality when every other user is silent
    lonely = ti_throughput(("3/7", "0/1", "0/1"), 1)
    assert lonely.per_user[0] == Fraction(3, 7)


def test_consistency_with_built_sets():
    assert consistency_check(WORKED, 1)
    assert consistency_check(WORKED, 2)
    assert consistency_check(("1/2", "1/2"), 1)
    # an always-on user starves the other at capability 1, exactly as
    # the closed form predicts
    assert consistency_check(("1/1", "1/2"), 1)
    with pytest.raises(BudgetExceededError):
        consistency_check(WORKED, 1, budget=10)


def test_optimal_duty_single_capability():
    res = optimal_duty(20, 1, 1e-4)
    assert abs(res.f_star - 0.05) < 1e-3
    assert res.rational_f == Fraction(1, 20)
    res2 = optimal_duty(2, 1, 1e-4)
    assert abs(res2.f_star - 0.5) < 1e-3


def test_optimal_duty_pinned_dense_grid_value():
    # frozen from an independent 1e-6-step scan: argmax 0.18633,
    # value 0.13565916191787997
    res = optimal_duty(20, 5, 1e-4)
    assert abs(res.f_star - 0.18633) < 1e-4
    assert abs(res.value - 0.13565916191787997) < 1e-9
    assert res.rational_value <= Fraction(13565916192, 10**11)


def test_optimal_duty_validation():
    with pytest.raises(ValueError):
        optimal_duty(5, 5, 1e-3)
    with pytest.raises(ValueError):
        optimal_duty(5, 1, 0)


def test_curve_rows_and_csv():
    rows = throughput_curve(range(10, 12), [1, 5, 10], ["1/10"])
    # gamma=10 is outside the model for K=10 and stays out of the table
    assert {(r.users, r.gamma) for r in rows} == {
        (10, 1), (10, 5), (11, 1), (11, 5), (11, 10)
    }
    first = next(r for r in rows if (r.users, r.gamma) == (10, 1))
    assert first.system == Fraction(9, 10) ** 9
    csv = curve_csv(rows)
    lines = csv.strip().splitlines()
    assert lines[0] == "users,gamma,duty,per_user,system"
    assert lines[1] == "10,1,1/10,0.0387420489,0.387420489"


def test_curve_zero_duty_row():
    rows = throughput_curve([4], [1], ["0/1"])
    assert rows[0].per_user == 0 and rows[0].system == 0
