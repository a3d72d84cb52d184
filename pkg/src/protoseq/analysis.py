"""Exhaustive verifiers for shift- and throughput-invariance.

A set of schedules is shift-invariant (SI) when every user tuple's
cross-correlation is the same under all cyclic shifts, pairwise SI when
that holds for all pairs, and throughput-invariant (TI) at receiver
capability gamma when every user's per-period success count is the same
under all shifts.  The verifiers here enumerate shift space exhaustively
and return verdicts carrying either a proof of coverage (the number of
configurations checked) or a concrete counterexample witness.

Enumeration always pins the first shift of a tuple to zero: adding a
common offset to all shifts only relabels slots cyclically, so each
orbit is visited once.  Every verdict is computed in exact integer and
rational arithmetic.  Searches that would exceed the evaluation budget
raise instead of silently passing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

from .core import (
    BinarySequence,
    BudgetExceededError,
    ProtoseqError,
    SequenceSet,
    ShiftsLike,
    ThetaProfile,
    as_shifts,
    at_most_mask,
    count_planes,
    hamming_cross_correlation,
    rotate_mask,
    theta_profile,
    validate_users,
)

__all__ = [
    "DEFAULT_BUDGET",
    "PreconditionError",
    "StructuralContradictionError",
    "Witness",
    "PropertyVerdict",
    "DeltaRecord",
    "StructuralReport",
    "SearchResult",
    "success_counts",
    "throughput_at",
    "is_si",
    "is_pairwise_si",
    "is_ti",
    "allone_constraint",
    "delta_record",
    "check_lemma_delta",
    "check_lemma_theta",
    "structural_hypotheses",
    "structural_conclusion",
    "verify_witness",
    "find_pairwise_si_not_si",
]

#: Default cap on slot evaluations per verdict.
DEFAULT_BUDGET = 10**8


class PreconditionError(ProtoseqError):
    """An operation's stated precondition does not hold for the inputs.

    Deliberately distinct from a ``False`` result: the check was not
    meaningful, not failed.
    """


class StructuralContradictionError(ProtoseqError):
    """An invariant that must hold for every input was violated.

    Raised, for example, if a set verifies as TI but not pairwise SI;
    this cannot happen for correct counting code, so it is an error
    rather than a verdict.
    """


@dataclass(frozen=True)
class Witness:
    """Concrete counterexample: one user tuple, two shift vectors, two values.

    For SI verdicts the values are cross-correlation counts of ``users``
    under the two tuple-local shift vectors.  For TI verdicts ``users``
    names the single user whose throughput differs and the shift vectors
    cover the whole set.
    """

    users: tuple[int, ...]
    shifts_a: tuple[int, ...]
    shifts_b: tuple[int, ...]
    value_a: object
    value_b: object


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of one exhaustive verification."""

    prop: str  # "SI" | "PAIRWISE_SI" | "TI"
    holds: bool
    witness: Witness | None
    configurations_checked: int
    gamma: int | None = None


@dataclass(frozen=True)
class DeltaRecord:
    """Change of a tuple's slot histogram between two shift vectors.

    ``deltas[j]`` is the j-ones bucket at ``to_shifts`` minus the same
    bucket at ``from_shifts``.  The buckets redistribute slots and ones,
    so the deltas always sum to zero, weighted and unweighted.
    """

    users: tuple[int, ...]
    from_shifts: tuple[int, ...]
    to_shifts: tuple[int, ...]
    deltas: tuple[int, ...]


@dataclass(frozen=True)
class StructuralReport:
    """Which structural implications applied to a set, and what they forced."""

    gamma: int
    ti: PropertyVerdict
    applicable: tuple[str, ...]
    si: PropertyVerdict | None
    notes: tuple[str, ...]


@dataclass(frozen=True)
class SearchResult:
    """Outcome of the random hunt for pairwise-SI-but-not-SI triples."""

    hits: tuple[SequenceSet, ...]
    candidates_tried: int
    pairwise_si_found: int
    seed: int


# ---------------------------------------------------------------------------
# throughput at fixed shifts


def success_counts(masks: Sequence[int], gamma: int, period: int) -> tuple[int, ...]:
    """Per-user count of slots where the user fires with at most gamma
    transmitters in total (itself included)."""
    planes = count_planes(masks)
    ok = at_most_mask(planes, gamma, period)
    return tuple((m & ok).bit_count() for m in masks)


def throughput_at(
    sset: SequenceSet, shifts: ShiftsLike, gamma: int
) -> tuple[Fraction, ...]:
    """Exact per-user throughput of the set at one shift assignment.

    User i's throughput is the fraction of slots per period where it
    transmits and at most gamma - 1 other users do; the period times any
    returned value is always an integer.
    """
    K = sset.size
    L = sset.period
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    taus = as_shifts(shifts, L, K)
    masks = [rotate_mask(m, t, L) for m, t in zip(sset.masks, taus)]
    return tuple(Fraction(c, L) for c in success_counts(masks, gamma, L))


# ---------------------------------------------------------------------------
# exhaustive invariance verdicts


def _rotation_tables(sset: SequenceSet) -> list[tuple[int, ...]]:
    L = sset.period
    return [tuple(rotate_mask(m, t, L) for t in range(L)) for m in sset.masks]


def _si_cost(K: int, L: int, sizes: Sequence[int]) -> int:
    return sum(comb(K, m) * L ** (m - 1) * L for m in sizes)


def _constant_correlation_scan(
    sset: SequenceSet, sizes: Sequence[int], prop: str, budget: int
) -> PropertyVerdict:
    K = sset.size
    L = sset.period
    cost = _si_cost(K, L, sizes)
    if cost > budget:
        raise BudgetExceededError(
            f"{prop} verification needs {cost} slot evaluations, budget is {budget}"
        )
    tables = _rotation_tables(sset) if any(m >= 2 for m in sizes) else []
    checked = 0
    for m in sizes:
        for users in itertools.combinations(range(1, K + 1), m):
            if m == 1:
                # a single schedule's correlation is its ones count at any shift
                checked += 1
                continue
            first = tables[users[0] - 1][0]
            rest_tables = [tables[u - 1] for u in users[1:]]
            base = None
            for rest in itertools.product(range(L), repeat=m - 1):
                acc = first
                for tab, t in zip(rest_tables, rest):
                    acc &= tab[t]
                    if not acc:
                        break
                h = acc.bit_count()
                checked += 1
                if base is None:
                    base = h
                elif h != base:
                    witness = Witness(
                        users=users,
                        shifts_a=(0,) * m,
                        shifts_b=(0,) + rest,
                        value_a=base,
                        value_b=h,
                    )
                    return PropertyVerdict(prop, False, witness, checked)
    return PropertyVerdict(prop, True, None, checked)


def is_si(sset: SequenceSet, budget: int = DEFAULT_BUDGET) -> PropertyVerdict:
    """Verify that every user tuple's cross-correlation is shift-independent.

    Exhausts all non-empty user tuples; within a tuple of size m the
    first shift is pinned to zero and the remaining m - 1 range over the
    full period.
    """
    sizes = range(1, sset.size + 1)
    return _constant_correlation_scan(sset, list(sizes), "SI", budget)


def is_pairwise_si(sset: SequenceSet, budget: int = DEFAULT_BUDGET) -> PropertyVerdict:
    """Shift-independence restricted to user pairs.

    Vacuously true for a single-user set.
    """
    sizes = [2] if sset.size >= 2 else []
    return _constant_correlation_scan(sset, sizes, "PAIRWISE_SI", budget)


def is_ti(
    sset: SequenceSet,
    gamma: int,
    budget: int = DEFAULT_BUDGET,
    cross_check: bool = True,
) -> PropertyVerdict:
    """Verify that per-user throughput is the same at every shift assignment.

    Enumerates all shift classes with the first user's shift pinned to
    zero.  When the verdict is positive, every throughput is strictly
    positive, and ``cross_check`` is on, the pairwise shift-invariance
    that such a set must exhibit is re-verified; a failure there signals
    an internal fault and raises.  Sets with a zero-throughput user can
    be TI without being pairwise SI (a silent user is trivially
    invariant), so the cross-check does not apply to them.
    """
    K = sset.size
    L = sset.period
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    cost = L ** (K - 1) * K * L
    if cost > budget:
        raise BudgetExceededError(
            f"TI verification needs {cost} slot evaluations, budget is {budget}"
        )
    tables = _rotation_tables(sset)
    pinned = tables[0][0]
    rest_tables = tables[1:]
    baseline: tuple[int, ...] | None = None
    checked = 0
    for rest in itertools.product(range(L), repeat=K - 1):
        masks = [pinned]
        masks.extend(tab[t] for tab, t in zip(rest_tables, rest))
        counts = success_counts(masks, gamma, L)
        checked += 1
        if baseline is None:
            baseline = counts
        elif counts != baseline:
            i = next(i for i in range(K) if counts[i] != baseline[i])
            witness = Witness(
                users=(i + 1,),
                shifts_a=(0,) * K,
                shifts_b=(0,) + rest,
                value_a=Fraction(baseline[i], L),
                value_b=Fraction(counts[i], L),
            )
            return PropertyVerdict("TI", False, witness, checked, gamma)
    verdict = PropertyVerdict("TI", True, None, checked, gamma)
    if cross_check and baseline is not None and all(c > 0 for c in baseline):
        pairwise = is_pairwise_si(sset, budget=budget)
        if not pairwise.holds:
            raise StructuralContradictionError(
                "set verified TI but failed the pairwise shift-invariance "
                f"cross-check: {pairwise.witness}"
            )
    return verdict


def allone_constraint(sset: SequenceSet, gamma: int) -> bool:
    """True iff the set carries at most gamma - 1 all-one schedules.

    With gamma or more always-on users, no other user can ever get a
    packet through, so positive throughput for everyone needs this bound.
    """
    if not 1 <= gamma < sset.size:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={sset.size}")
    return sum(1 for s in sset.sequences if s.is_all_one()) <= gamma - 1


def verify_witness(sset: SequenceSet, verdict: PropertyVerdict) -> bool:
    """Re-evaluate a negative verdict's witness from scratch.

    Returns True when both recorded values reproduce exactly and differ,
    i.e. the counterexample is genuine.
    """
    w = verdict.witness
    if w is None:
        return False
    if verdict.prop in ("SI", "PAIRWISE_SI"):
        va = hamming_cross_correlation(sset, w.users, w.shifts_a)
        vb = hamming_cross_correlation(sset, w.users, w.shifts_b)
    elif verdict.prop == "TI":
        if verdict.gamma is None:
            return False
        i = w.users[0] - 1
        va = throughput_at(sset, w.shifts_a, verdict.gamma)[i]
        vb = throughput_at(sset, w.shifts_b, verdict.gamma)[i]
    else:
        raise ValueError(f"unknown property {verdict.prop!r}")
    return va == w.value_a and vb == w.value_b and va != vb


# ---------------------------------------------------------------------------
# histogram deltas and the identities they must satisfy


def delta_record(
    sset: SequenceSet,
    users: Sequence[int],
    from_shifts: ShiftsLike,
    to_shifts: ShiftsLike,
) -> DeltaRecord:
    """Bucket-by-bucket histogram change between two shift vectors."""
    users = validate_users(users, sset.size)
    if len(users) < 2:
        raise ValueError("delta records need a tuple of at least two users")
    L = sset.period
    src = theta_profile(sset, users, from_shifts)
    dst = theta_profile(sset, users, to_shifts)
    deltas = tuple(b - a for a, b in zip(src.counts, dst.counts))
    return DeltaRecord(
        users=users,
        from_shifts=as_shifts(from_shifts, L, len(users)),
        to_shifts=as_shifts(to_shifts, L, len(users)),
        deltas=deltas,
    )


def _require_subsets_si(
    sset: SequenceSet, users: tuple[int, ...], budget: int
) -> None:
    m = len(users)
    for sub in itertools.combinations(users, m - 1):
        verdict = is_si(sset.subset(sub), budget=budget)
        if not verdict.holds:
            raise PreconditionError(
                f"user subset {sub} is not shift-invariant; witness "
                f"{verdict.witness}"
            )


def check_lemma_delta(
    sset: SequenceSet,
    users: Sequence[int],
    from_shifts: ShiftsLike,
    to_shifts: ShiftsLike,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Check the forced shape of histogram changes on an almost-SI tuple.

    Precondition (verified here, error if it fails): every (M-1)-subset
    of the M chosen users is shift-invariant.  Then the only degree of
    freedom left in a shift change is the top bucket's delta, and each
    lower bucket must move by (-1)^(M-i) * C(M, i) times it.  For M = 2
    this reduces to delta_1 = -2 * delta_2.
    """
    users = validate_users(users, sset.size)
    if len(users) < 2:
        raise ValueError("the identity needs a tuple of at least two users")
    _require_subsets_si(sset, users, budget)
    rec = delta_record(sset, users, from_shifts, to_shifts)
    m = len(users)
    top = rec.deltas[m]
    return all(
        rec.deltas[i] == (-1) ** (m - i) * comb(m, i) * top for i in range(1, m)
    )


def check_lemma_theta(
    sset: SequenceSet,
    split_m: int,
    gamma: int,
    from_shifts: ShiftsLike,
    to_shifts: ShiftsLike,
    tail_shifts: ShiftsLike = (),
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Check the head-delta, tail-histogram orthogonality identity.

    The set splits into a head of the first ``split_m`` users, whose
    shifts move, and a tail holding the rest at ``tail_shifts``.
    Preconditions (verified here): the whole set is TI at ``gamma`` and
    every (split_m - 1)-subset of the head is shift-invariant.  The
    identity then demands that the head's top-bucket delta annihilates
    the alternating binomial combination of the tail buckets at levels
    gamma - i; buckets outside the tail's range count as zero, and an
    empty tail contributes a period-sized zero-ones bucket.
    """
    K = sset.size
    L = sset.period
    if not 2 <= split_m <= K:
        raise ValueError(f"split must satisfy 2 <= M <= K={K}")
    ti = is_ti(sset, gamma, budget=budget)
    if not ti.holds:
        raise PreconditionError(
            f"set is not throughput-invariant at gamma={gamma}; witness "
            f"{ti.witness}"
        )
    head = tuple(range(1, split_m + 1))
    _require_subsets_si(sset, head, budget)
    h_from = hamming_cross_correlation(sset, head, from_shifts)
    h_to = hamming_cross_correlation(sset, head, to_shifts)
    delta_top = h_to - h_from
    tail = tuple(range(split_m + 1, K + 1))
    if tail:
        profile = theta_profile(sset, tail, tail_shifts)
    else:
        profile = ThetaProfile((L,))
    total = sum(
        (-1) ** (split_m - i) * comb(split_m - 2, i - 1) * profile.count(gamma - i)
        for i in range(1, split_m)
    )
    return delta_top * total == 0


# ---------------------------------------------------------------------------
# structural implications


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _common_duty(sset: SequenceSet) -> Fraction | None:
    factors = set(sset.duty_factors)
    return factors.pop() if len(factors) == 1 else None


def structural_hypotheses(
    size: int, gamma: int, duty_factors: Sequence[Fraction]
) -> tuple[str, ...]:
    """Which TI-forces-SI implications could apply, from arithmetic alone.

    Checks only the capability value and the duty-factor side conditions
    (common value, gcd with the denominator, primality); whether the set
    actually is TI, and whether throughputs are positive, is judged by
    the caller.  The leading-capability implications need no duty
    condition; the tagged ones need a shared duty factor n/d outside
    {0, 1}, an odd prime for the K-3 conditions (so that half of K-2 is
    an integer), and the stated gcd to be one.
    """
    K = size
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    tags: list[str] = []
    if gamma == 1:
        tags.append("gamma=1")
    if gamma == K - 1:
        tags.append("gamma=K-1")
    factors = set(Fraction(f) for f in duty_factors)
    if len(factors) == 1:
        f = factors.pop()
        if f not in (0, 1):
            d = f.denominator
            if gcd(K - 2, d) == 1:
                if gamma == 2:
                    tags.append("gamma=2")
                if gamma == K - 2:
                    tags.append("gamma=K-2")
            half_ok = (
                _is_prime(K - 3)
                and (K - 2) % 2 == 0
                and gcd((K - 2) // 2, d) == 1
            )
            if half_ok:
                if gamma == 3:
                    tags.append("gamma=3")
                if gamma == K - 3:
                    tags.append("gamma=K-3")
    return tuple(tags)


def structural_conclusion(
    sset: SequenceSet, gamma: int, budget: int = DEFAULT_BUDGET
) -> StructuralReport:
    """Apply the known TI-forces-SI implications and verify their conclusion.

    After confirming the set is TI at ``gamma``, each implication whose
    hypotheses hold (capability value, common duty factor, gcd and
    primality side conditions, strictly positive throughputs) is
    recorded, and full shift-invariance is then verified.  If some
    implication applies but the set is not SI, counting itself must be
    broken and an error is raised.  Failed hypotheses are reported as
    inapplicable, never used to conclude anything.
    """
    K = sset.size
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    ti = is_ti(sset, gamma, budget=budget)
    if not ti.holds:
        return StructuralReport(
            gamma=gamma,
            ti=ti,
            applicable=(),
            si=None,
            notes=("set is not throughput-invariant at this capability",),
        )

    notes: list[str] = []
    throughputs = throughput_at(sset, (0,) * K, gamma)
    positive = all(r > 0 for r in throughputs)
    if not positive:
        notes.append(
            "some user has zero throughput; the structural implications "
            "assume strictly positive throughput and are not applied"
        )

    applicable: list[str] = []
    if positive:
        applicable = list(structural_hypotheses(K, gamma, sset.duty_factors))
        if not applicable and _common_duty(sset) is None:
            notes.append(
                "users have unequal duty factors; the common-duty "
                "implications do not apply"
            )

    if not applicable:
        if positive:
            notes.append("no structural implication applies at this capability")
        return StructuralReport(gamma, ti, (), None, tuple(notes))

    si = is_si(sset, budget=budget)
    if not si.holds:
        raise StructuralContradictionError(
            f"implications {applicable} force shift-invariance but the set "
            f"is not SI; witness {si.witness}"
        )
    return StructuralReport(gamma, ti, tuple(applicable), si, tuple(notes))


# ---------------------------------------------------------------------------
# random search for pairwise-SI triples that are not SI


def _pair_correlation_constant(m1: int, m2: int, period: int) -> bool:
    base = (m1 & m2).bit_count()
    r = m2
    low = 1
    top = period - 1
    for _ in range(period - 1):
        r = (r >> 1) | ((r & low) << top)
        if (m1 & r).bit_count() != base:
            return False
    return True


def _mask_sequence(mask: int, period: int) -> BinarySequence:
    return BinarySequence(tuple((mask >> t) & 1 for t in range(period)))


def find_pairwise_si_not_si(
    candidates: int,
    seed: int,
    min_period: int = 2,
    max_period: int = 12,
) -> SearchResult:
    """Seeded random hunt for triples whose pairs are all SI but whose
    triple correlation is not.

    Whether such triples exist at all is open; a run with zero hits is
    reported as exactly that and proves nothing.  Any hit found is worth
    freezing as a regression fixture, since it exercises the histogram
    delta identity with a non-zero top bucket.
    """
    rng = random.Random(seed)
    hits: list[SequenceSet] = []
    pairwise_found = 0
    for _ in range(candidates):
        L = rng.randint(min_period, max_period)
        m1 = rng.getrandbits(L)
        m2 = rng.getrandbits(L)
        m3 = rng.getrandbits(L)
        if not _pair_correlation_constant(m1, m2, L):
            continue
        if not _pair_correlation_constant(m1, m3, L):
            continue
        if not _pair_correlation_constant(m2, m3, L):
            continue
        pairwise_found += 1
        rot2 = tuple(rotate_mask(m2, t, L) for t in range(L))
        rot3 = tuple(rotate_mask(m3, t, L) for t in range(L))
        base = (m1 & m2 & m3).bit_count()
        constant = True
        for t2 in range(L):
            a = m1 & rot2[t2]
            for t3 in range(L):
                if (a & rot3[t3]).bit_count() != base:
                    constant = False
                    break
            if not constant:
                break
        if not constant:
            hits.append(
                SequenceSet(
                    (
                        _mask_sequence(m1, L),
                        _mask_sequence(m2, L),
                        _mask_sequence(m3, L),
                    )
                )
            )
    return SearchResult(
        hits=tuple(hits),
        candidates_tried=candidates,
        pairwise_si_found=pairwise_found,
        seed=seed,
    )
