"""Closed-form throughput of throughput-invariant schedule sets.

For a TI set, user i's throughput depends only on the duty factors: it
is f_i times the probability that at most gamma - 1 of the other users
transmit in a slot, with each user j present independently with weight
f_j.  The symmetric case collapses to a binomial tail, which is what the
duty-factor optimizer and the curve writer evaluate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .core import BudgetExceededError, rotate_mask
from .analysis import DEFAULT_BUDGET, success_counts
from .construction import as_duty_factors, construct_si

__all__ = [
    "ThroughputReport",
    "OptimalDuty",
    "CurveRow",
    "ti_throughput",
    "symmetric_throughput",
    "consistency_check",
    "optimal_duty",
    "throughput_curve",
    "curve_csv",
]


@dataclass(frozen=True)
class ThroughputReport:
    """Per-user throughput values and how they were obtained."""

    per_user: tuple[Fraction, ...]
    gamma: int
    mode: str  # "closed_form" | "exhaustive" | "empirical"


@dataclass(frozen=True)
class OptimalDuty:
    """Grid-search result for the best common duty factor."""

    f_star: float
    value: float
    rational_f: Fraction
    rational_value: Fraction
    resolution: float


@dataclass(frozen=True)
class CurveRow:
    """One point of the symmetric-throughput table."""

    users: int
    gamma: int
    duty: Fraction
    per_user: Fraction
    system: Fraction


def _others_distribution(duty: Sequence[Fraction], skip: int) -> list[Fraction]:
    """Exact distribution of how many users other than ``skip`` transmit."""
    coeffs = [Fraction(1)]
    for k, f in enumerate(duty):
        if k == skip:
            continue
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        g = 1 - f
        for j, c in enumerate(coeffs):
            if g:
                nxt[j] += c * g
            if f:
                nxt[j + 1] += c * f
        coeffs = nxt
    return coeffs


def ti_throughput(duty: Iterable, gamma: int) -> ThroughputReport:
    """Exact per-user throughput forced on any TI set with these duty factors.

    R_i = f_i * sum over subsets H of the other users with |H| < gamma of
    prod(f_j, j in H) * prod(1 - f_k, k outside H and i).
    """
    duty = as_duty_factors(duty)
    K = len(duty)
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    per_user = []
    for i, f in enumerate(duty):
        dist = _others_distribution(duty, i)
        per_user.append(f * sum(dist[:gamma]))
    return ThroughputReport(tuple(per_user), gamma, "closed_form")


def symmetric_throughput(f, users: int, gamma: int) -> Fraction:
    """Common throughput when all ``users`` share duty factor f."""
    f = Fraction(f)
    if not 0 <= f <= 1:
        raise ValueError(f"duty factor {f} outside [0, 1]")
    if not 1 <= gamma < users:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={users}")
    return sum(
        comb(users - 1, j) * f ** (j + 1) * (1 - f) ** (users - 1 - j)
        for j in range(gamma)
    )


def consistency_check(
    duty: Iterable, gamma: int, budget: int = DEFAULT_BUDGET
) -> bool:
    """Cross-validate the closed form against the built set, exhaustively.

    Builds the set for the duty factors, averages the per-user success
    counts over every shift class (first shift pinned), and compares the
    exact average with the closed form.
    """
    duty = as_duty_factors(duty)
    sset = construct_si(duty)
    K = sset.size
    L = sset.period
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    classes = L ** (K - 1)
    cost = classes * K * L
    if cost > budget:
        raise BudgetExceededError(
            f"exhaustive average needs {cost} slot evaluations, budget is {budget}"
        )
    tables = [tuple(rotate_mask(m, t, L) for t in range(L)) for m in sset.masks]
    totals = [0] * K
    for rest in itertools.product(range(L), repeat=K - 1):
        masks = [tables[0][0]]
        masks.extend(tables[i + 1][t] for i, t in enumerate(rest))
        for i, c in enumerate(success_counts(masks, gamma, L)):
            totals[i] += c
    average = tuple(Fraction(t, classes * L) for t in totals)
    return average == ti_throughput(duty, gamma).per_user


def _symmetric_values(f: np.ndarray, users: int, gamma: int) -> np.ndarray:
    total = np.zeros_like(f)
    for j in range(gamma):
        total += comb(users - 1, j) * f ** (j + 1) * (1.0 - f) ** (users - 1 - j)
    return total


def optimal_duty(users: int, gamma: int, resolution: float = 1e-4) -> OptimalDuty:
    """Best common duty factor for the symmetric throughput, by grid search.

    The curve is scanned on a [0, 1] grid at ``resolution``, then on a
    window around the best point a thousand times finer; no unimodality
    is assumed.  Ties break toward the smaller duty factor.  The search
    itself runs in floating point; the winner is also re-scored exactly
    at nearby rationals for the report.
    """
    if not 1 <= gamma < users:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={users}")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    steps = max(2, round(1.0 / resolution))
    grid = np.linspace(0.0, 1.0, steps + 1)
    coarse = _symmetric_values(grid, users, gamma)
    best = float(grid[int(np.argmax(coarse))])
    lo = max(0.0, best - resolution)
    hi = min(1.0, best + resolution)
    fine = np.linspace(lo, hi, 2001)
    values = _symmetric_values(fine, users, gamma)
    idx = int(np.argmax(values))
    f_star = float(fine[idx])
    value = float(values[idx])

    # exact re-scoring at simple rationals near the float winner
    candidates = {Fraction(f_star).limit_denominator(q)
                  for q in (users, 2 * users, 10, 100, 1000, 10**6)}
    best_rat = None
    best_val = None
    for cand in sorted(candidates):
        if not 0 <= cand <= 1:
            continue
        v = symmetric_throughput(cand, users, gamma)
        if best_val is None or v > best_val:
            best_rat, best_val = cand, v
    return OptimalDuty(
        f_star=f_star,
        value=value,
        rational_f=best_rat,
        rational_value=best_val,
        resolution=resolution,
    )


def throughput_curve(
    k_values: Iterable[int], gammas: Iterable[int], duty_factors: Iterable
) -> tuple[CurveRow, ...]:
    """Symmetric per-user and system throughput over a parameter grid.

    System throughput is the per-user value times the user count.
    Combinations with gamma >= K fall outside the model and are omitted.
    """
    duties = as_duty_factors(duty_factors)
    rows = []
    for k in k_values:
        for g in gammas:
            if not 1 <= g < k:
                continue
            for f in duties:
                per_user = symmetric_throughput(f, k, g)
                rows.append(CurveRow(k, g, f, per_user, k * per_user))
    return tuple(rows)


def curve_csv(rows: Iterable[CurveRow]) -> str:
    """Render curve rows as CSV with 12-significant-digit decimals."""
    lines = ["users,gamma,duty,per_user,system"]
    for r in rows:
        lines.append(
            f"{r.users},{r.gamma},{r.duty.numerator}/{r.duty.denominator},"
            f"{float(r.per_user):.12g},{float(r.system):.12g}"
        )
    return "\n".join(lines) + "\n"
