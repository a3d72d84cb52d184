"""Shared helpers for randomized and exhaustive checks."""

import itertools
import random

from protoseq import BinarySequence, SequenceSet, count_config


def random_sequence(rng: random.Random, period: int) -> BinarySequence:
    return BinarySequence(tuple(rng.randint(0, 1) for _ in range(period)))


def random_set(rng: random.Random, users: int, period: int) -> SequenceSet:
    return SequenceSet(tuple(random_sequence(rng, period) for _ in range(users)))


def exhaustive_pair_correlations(sset, users):
    """All correlation values of a user pair over the full shift square."""
    L = sset.period
    from protoseq import hamming_cross_correlation

    return {
        hamming_cross_correlation(sset, users, (a, b))
        for a in range(L)
        for b in range(L)
    }


def config_constancy_si_oracle(sset) -> bool:
    """Independent SI test: every full pattern count is shift-independent.

    Scans all 2^K patterns over all shift classes with the first shift
    pinned; feasible only for small sets.
    """
    K = sset.size
    L = sset.period
    patterns = list(itertools.product((0, 1), repeat=K))
    baseline = None
    for rest in itertools.product(range(L), repeat=K - 1):
        shifts = (0,) + rest
        counts = tuple(count_config(sset, shifts, p) for p in patterns)
        if baseline is None:
            baseline = counts
        elif counts != baseline:
            return False
    return True
