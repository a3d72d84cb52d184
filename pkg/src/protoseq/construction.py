"""Shift-invariant schedule sets built from exact duty factors.

Given duty factors n_i/d_i in lowest terms, the builder lays out, for
each user i, an array with prod(d_1..d_{i-1}) rows and d_i columns that
carries exactly n_i ones per row, then reads the array out column by
column and repeats the result up to the common period d_1*d_2*...*d_K.
Sets built this way have shift-independent cross-correlations on every
user tuple, and their period meets the divisibility floor that any set
with throughput-invariant behavior must respect.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

from .core import BinarySequence, SequenceSet

__all__ = [
    "as_duty_factors",
    "parse_duty_spec",
    "min_period_bound",
    "si_divisibility",
    "build_arrays",
    "construct_si",
]


def as_duty_factors(values: Iterable) -> tuple[Fraction, ...]:
    """Normalize duty factors to Fractions in [0, 1], lowest terms.

    Accepts Fractions, ints, strings like "2/3", floats with exact binary
    values, or (num, den) pairs.  Inputs such as 2/4 reduce to 1/2.
    """
    out = []
    for v in values:
        f = Fraction(*v) if isinstance(v, tuple) else Fraction(v)
        if not 0 <= f <= 1:
            raise ValueError(f"duty factor {f} outside [0, 1]")
        out.append(f)
    if not out:
        raise ValueError("need at least one duty factor")
    return tuple(out)


def parse_duty_spec(text: str) -> tuple[Fraction, ...]:
    """Parse a comma-separated duty list such as ``2/3,1/3,1/3``."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty duty factor list")
    return as_duty_factors(parts)


def min_period_bound(duty: Iterable) -> int:
    """Product of the duty denominators: the floor any matching set's period
    must be divisible by, and the period the builder actually achieves."""
    duty = as_duty_factors(duty)
    prod = 1
    for f in duty:
        prod *= f.denominator
    return prod


def si_divisibility(duty: Iterable, subset: Sequence[int]) -> int:
    """Per-subset divisor of the common period.

    For a 1-based user subset U, returns prod(d_i, i in U) divided by
    gcd(prod d_i, prod n_i); the common period of a shift-invariant set
    with these duty factors is divisible by this value.
    """
    duty = as_duty_factors(duty)
    idx = sorted({int(u) for u in subset})
    if not idx:
        raise ValueError("subset must be non-empty")
    if idx[0] < 1 or idx[-1] > len(duty):
        raise ValueError(f"subset indices must lie in [1, {len(duty)}]")
    prod_d = 1
    prod_n = 1
    for u in idx:
        prod_d *= duty[u - 1].denominator
        prod_n *= duty[u - 1].numerator
    return prod_d // math.gcd(prod_d, prod_n)


def build_arrays(
    duty: Iterable, fill: str = "left", seed: int | None = None
) -> list[list[list[int]]]:
    """Per-user 0/1 layout arrays with exactly n_i ones in each row.

    ``fill="left"`` packs the ones into the leading columns of every row,
    which makes the construction deterministic.  ``fill="random"`` picks
    the one-columns per row with a seeded generator; any row fill yields
    a shift-invariant set, and tests exercise both.
    """
    duty = as_duty_factors(duty)
    if fill not in ("left", "random"):
        raise ValueError("fill must be 'left' or 'random'")
    rng = random.Random(seed)
    arrays = []
    rows = 1
    for f in duty:
        n, d = f.numerator, f.denominator
        array = []
        for _ in range(rows):
            row = [0] * d
            cols = range(n) if fill == "left" else rng.sample(range(d), n)
            for c in cols:
                row[c] = 1
            array.append(row)
        arrays.append(array)
        rows *= d
    return arrays


def construct_si(
    duty: Iterable, fill: str = "left", seed: int | None = None
) -> SequenceSet:
    """Build a shift-invariant set realizing the given duty factors exactly.

    The common period is the product of the duty denominators; schedule i
    is its array read out column by column (rows top to bottom inside a
    column) and repeated periodically.
    """
    duty = as_duty_factors(duty)
    L = min_period_bound(duty)
    arrays = build_arrays(duty, fill=fill, seed=seed)
    sequences = []
    for array in arrays:
        rows = len(array)
        cols = len(array[0])
        base = [array[r][c] for c in range(cols) for r in range(rows)]
        span = rows * cols
        bits = tuple(base[t % span] for t in range(L))
        sequences.append(BinarySequence(bits))
    return SequenceSet(tuple(sequences))
