"""Slot-by-slot reference implementations of the counting primitives.

Everything here walks slot indices directly and keeps no bitmask state.
It is intentionally slow and obvious; the test suite runs it against the
bit-parallel layer in `protoseq.core` on random instances.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import SequenceSet, ShiftsLike, as_shifts, validate_users


def count_config(sset: SequenceSet, shifts: ShiftsLike, pattern: Sequence[int]) -> int:
    L = sset.period
    taus = as_shifts(shifts, L, sset.size)
    pat = tuple(int(b) for b in pattern)
    if len(pat) != sset.size:
        raise ValueError("pattern length does not match K")
    total = 0
    for t in range(L):
        if all(
            seq.bits[(t + tau) % L] == b
            for seq, tau, b in zip(sset.sequences, taus, pat)
        ):
            total += 1
    return total


def hamming_cross_correlation(
    sset: SequenceSet, users: Sequence[int], shifts: ShiftsLike
) -> int:
    users = validate_users(users, sset.size)
    L = sset.period
    taus = as_shifts(shifts, L, len(users))
    total = 0
    for t in range(L):
        if all(
            sset.sequences[u - 1].bits[(t + tau) % L] for u, tau in zip(users, taus)
        ):
            total += 1
    return total


def theta_counts(
    sset: SequenceSet, users: Sequence[int], shifts: ShiftsLike
) -> tuple[int, ...]:
    users = validate_users(users, sset.size)
    L = sset.period
    taus = as_shifts(shifts, L, len(users))
    counts = [0] * (len(users) + 1)
    for t in range(L):
        ones = sum(
            sset.sequences[u - 1].bits[(t + tau) % L] for u, tau in zip(users, taus)
        )
        counts[ones] += 1
    return tuple(counts)


def throughput_at(
    sset: SequenceSet, shifts: ShiftsLike, gamma: int
) -> tuple[Fraction, ...]:
    K = sset.size
    L = sset.period
    if not 1 <= gamma < K:
        raise ValueError("gamma must satisfy 1 <= gamma < K")
    taus = as_shifts(shifts, L, K)
    good = [0] * K
    for t in range(L):
        fires = [seq.bits[(t + tau) % L] for seq, tau in zip(sset.sequences, taus)]
        total = sum(fires)
        if total <= gamma:
            for i, f in enumerate(fires):
                if f:
                    good[i] += 1
    return tuple(Fraction(g, L) for g in good)
