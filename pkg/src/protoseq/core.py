"""Periodic binary transmission schedules and exact slot-counting primitives.

A user of a slot-synchronous shared channel transmits according to a
periodic 0/1 schedule: a one in slot t means "send a packet in slot t".
Because senders get no feedback, each schedule is observed under an
unknown cyclic shift, and every quantity of interest here is a count of
slots taken over one common period under such shifts.

All counting is exact.  Schedules are mirrored into arbitrary-precision
integer bitmasks (slot t lives at bit t), so correlating two shifted
schedules is an AND plus a popcount, and per-slot transmitter totals are
accumulated in bit-sliced counter planes.  Ratios are
`fractions.Fraction` values; this module contains no floating point.
A deliberately naive slot-by-slot mirror of these operations lives in
`protoseq.reference` for differential testing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

#: Exact ratio type used for duty factors and throughputs.
Rational = Fraction

__all__ = [
    "Rational",
    "ProtoseqError",
    "BudgetExceededError",
    "BinarySequence",
    "SequenceSet",
    "ShiftAssignment",
    "ThetaProfile",
    "duty_factor",
    "cyclic_shift",
    "count_config",
    "hamming_cross_correlation",
    "theta_profile",
    "full_mask",
    "rotate_mask",
    "count_planes",
    "at_most_mask",
    "exact_count_mask",
    "parse_sequence_set",
    "format_sequence_set",
]


class ProtoseqError(Exception):
    """Base class for toolkit-specific failures."""


class BudgetExceededError(ProtoseqError):
    """An exhaustive enumeration would exceed the configured budget.

    Raised up front, before any work is done, so that a verdict is never
    silently based on a truncated search.
    """


# ---------------------------------------------------------------------------
# bitmask helpers


def full_mask(period: int) -> int:
    """All-ones mask covering one period."""
    return (1 << period) - 1


def rotate_mask(mask: int, tau: int, period: int) -> int:
    """Cyclically advance a schedule mask by ``tau`` slots.

    Bit t of the result equals bit (t + tau) mod period of the input,
    matching how a shifted schedule is read on the channel.
    """
    tau %= period
    if tau == 0:
        return mask
    return ((mask >> tau) | (mask << (period - tau))) & full_mask(period)


def count_planes(masks: Iterable[int]) -> list[int]:
    """Bit-sliced per-slot sum of several schedule masks.

    Returns planes p0, p1, ... where bit t of plane k is bit k of the
    number of masks that have a one in slot t.  Adding one mask is a
    ripple-carry over the planes, so the whole sum costs O(n log n)
    integer operations regardless of the period.
    """
    planes: list[int] = []
    for m in masks:
        carry = m
        i = 0
        while carry:
            if i == len(planes):
                planes.append(carry)
                break
            planes[i], carry = planes[i] ^ carry, planes[i] & carry
            i += 1
    return planes


def at_most_mask(planes: Sequence[int], limit: int, period: int) -> int:
    """Mask of slots whose bit-sliced count is <= limit."""
    if limit < 0:
        return 0
    if limit >> len(planes):
        return full_mask(period)
    full = full_mask(period)
    greater = 0
    equal = full
    for k in range(len(planes) - 1, -1, -1):
        p = planes[k]
        if (limit >> k) & 1:
            equal &= p
        else:
            greater |= equal & p
            equal &= ~p & full
    return full & ~greater


def exact_count_mask(planes: Sequence[int], j: int, period: int) -> int:
    """Mask of slots whose bit-sliced count is exactly j."""
    if j < 0 or (j >> len(planes)):
        return 0
    full = full_mask(period)
    m = full
    for k, p in enumerate(planes):
        m &= p if (j >> k) & 1 else ~p & full
    return m


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class BinarySequence:
    """One user's periodic 0/1 schedule; slot t repeats every ``period`` slots."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("a schedule needs at least one slot")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("schedule entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_string(cls, text: str) -> "BinarySequence":
        return cls(tuple(int(c) for c in text.strip()))

    @property
    def period(self) -> int:
        return len(self.bits)

    @cached_property
    def ones(self) -> int:
        return sum(self.bits)

    @cached_property
    def mask(self) -> int:
        """Integer bitmask with slot t at bit t."""
        m = 0
        for t, b in enumerate(self.bits):
            if b:
                m |= 1 << t
        return m

    @property
    def duty(self) -> Fraction:
        return Fraction(self.ones, self.period)

    def is_all_one(self) -> bool:
        return self.ones == self.period

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits)

    def __len__(self) -> int:
        return self.period


@dataclass(frozen=True)
class SequenceSet:
    """K schedules sharing one common period; the unit all analyses work on.

    Users are numbered 1..K throughout the toolkit, matching how user
    tuples are written in reports and witnesses.
    """

    sequences: tuple[BinarySequence, ...]

    def __post_init__(self) -> None:
        seqs = tuple(
            s if isinstance(s, BinarySequence) else BinarySequence(tuple(s))
            for s in self.sequences
        )
        if not seqs:
            raise ValueError("a sequence set needs at least one schedule")
        period = seqs[0].period
        if any(s.period != period for s in seqs):
            raise ValueError("all schedules in a set must share one period")
        object.__setattr__(self, "sequences", seqs)

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "SequenceSet":
        return cls(tuple(BinarySequence.from_string(r) for r in rows))

    @property
    def size(self) -> int:
        return len(self.sequences)

    @property
    def period(self) -> int:
        return self.sequences[0].period

    @cached_property
    def masks(self) -> tuple[int, ...]:
        return tuple(s.mask for s in self.sequences)

    @property
    def duty_factors(self) -> tuple[Fraction, ...]:
        return tuple(s.duty for s in self.sequences)

    def subset(self, users: Sequence[int]) -> "SequenceSet":
        """Sub-set holding the given 1-based users, in the given order."""
        users = validate_users(users, self.size)
        return SequenceSet(tuple(self.sequences[u - 1] for u in users))


@dataclass(frozen=True)
class ShiftAssignment:
    """Cyclic offsets, one per user, reduced to [0, period)."""

    shifts: tuple[int, ...]
    period: int

    def __post_init__(self) -> None:
        if self.period <= 0:
            raise ValueError("period must be positive")
        object.__setattr__(
            self, "shifts", tuple(int(s) % self.period for s in self.shifts)
        )

    def __len__(self) -> int:
        return len(self.shifts)

    def __iter__(self):
        return iter(self.shifts)


ShiftsLike = Union[ShiftAssignment, Sequence[int]]


@dataclass(frozen=True)
class ThetaProfile:
    """Histogram of slots by how many tuple members transmit in them.

    ``counts[j]`` is the number of slots in one period where exactly j of
    the (shifted) tuple members have a one.  Prefix and suffix sums are
    exposed because threshold counts of this histogram drive all the
    throughput and invariance arguments.
    """

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        counts = tuple(int(c) for c in self.counts)
        if not counts or any(c < 0 for c in counts):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def period(self) -> int:
        return sum(self.counts)

    @property
    def tuple_size(self) -> int:
        return len(self.counts) - 1

    def count(self, j: int) -> int:
        """counts[j], or 0 outside the histogram range."""
        if 0 <= j <= self.tuple_size:
            return self.counts[j]
        return 0

    def at_most(self, j: int) -> int:
        """Slots with at most j ones among the tuple members."""
        if j < 0:
            return 0
        return sum(self.counts[: min(j, self.tuple_size) + 1])

    def at_least(self, j: int) -> int:
        """Slots with at least j ones among the tuple members."""
        if j <= 0:
            return self.period
        if j > self.tuple_size:
            return 0
        return sum(self.counts[j:])


# ---------------------------------------------------------------------------
# validation helpers


def validate_users(users: Sequence[int], size: int) -> tuple[int, ...]:
    """Check a 1-based, strictly increasing user tuple against set size K."""
    t = tuple(int(u) for u in users)
    if not t:
        raise ValueError("user tuple must be non-empty")
    if any(not 1 <= u <= size for u in t):
        raise ValueError(f"user indices must lie in [1, {size}]: {t}")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise ValueError(f"user indices must be strictly increasing: {t}")
    return t


def as_shifts(shifts: ShiftsLike, period: int, expected: int) -> tuple[int, ...]:
    """Normalize shifts to [0, period) and check their count."""
    if isinstance(shifts, ShiftAssignment):
        if shifts.period != period:
            raise ValueError("shift assignment period does not match the set")
        values = shifts.shifts
    else:
        values = tuple(int(s) % period for s in shifts)
    if len(values) != expected:
        raise ValueError(f"expected {expected} shifts, got {len(values)}")
    return values


# ---------------------------------------------------------------------------
# operations


def duty_factor(seq: BinarySequence) -> Fraction:
    """Fraction of ones per period, in lowest terms."""
    return seq.duty


def cyclic_shift(seq: BinarySequence, tau: int) -> BinarySequence:
    """Schedule as observed under offset tau: bit t becomes bit (t+tau) mod L.

    Negative offsets are accepted and reduced modulo the period.
    """
    L = seq.period
    tau %= L
    if tau == 0:
        return seq
    return BinarySequence(seq.bits[tau:] + seq.bits[:tau])


def count_config(
    sset: SequenceSet, shifts: ShiftsLike, pattern: Sequence[int]
) -> int:
    """Number of slots where each shifted user matches its pattern bit.

    ``pattern[j] = 1`` demands that user j+1 transmits in the slot,
    ``pattern[j] = 0`` that it stays silent; all K users are constrained
    at once, so summing over every pattern partitions the period.
    """
    K = sset.size
    L = sset.period
    taus = as_shifts(shifts, L, K)
    pat = tuple(int(b) for b in pattern)
    if len(pat) != K:
        raise ValueError(f"pattern length {len(pat)} does not match K={K}")
    if any(b not in (0, 1) for b in pat):
        raise ValueError("pattern entries must be 0 or 1")
    full = full_mask(L)
    acc = full
    for seq, tau, b in zip(sset.sequences, taus, pat):
        m = rotate_mask(seq.mask, tau, L)
        acc &= m if b else ~m & full
        if not acc:
            return 0
    return acc.bit_count()


def _tuple_masks(
    sset: SequenceSet, users: Sequence[int], shifts: ShiftsLike
) -> list[int]:
    users = validate_users(users, sset.size)
    L = sset.period
    taus = as_shifts(shifts, L, len(users))
    return [
        rotate_mask(sset.sequences[u - 1].mask, tau, L)
        for u, tau in zip(users, taus)
    ]


def hamming_cross_correlation(
    sset: SequenceSet, users: Sequence[int], shifts: ShiftsLike
) -> int:
    """Slots in which every member of the (shifted) user tuple transmits.

    Defined for any non-empty, strictly increasing tuple of users; for a
    pair it is the usual cyclic cross-correlation of the two schedules.
    """
    masks = _tuple_masks(sset, users, shifts)
    acc = masks[0]
    for m in masks[1:]:
        acc &= m
        if not acc:
            return 0
    return acc.bit_count()


def theta_profile(
    sset: SequenceSet, users: Sequence[int], shifts: ShiftsLike
) -> ThetaProfile:
    """Per-slot histogram of simultaneous ones among a shifted user tuple.

    The top bucket equals ``hamming_cross_correlation`` for the same
    arguments; the buckets always sum to the period.
    """
    masks = _tuple_masks(sset, users, shifts)
    L = sset.period
    planes = count_planes(masks)
    counts = tuple(
        exact_count_mask(planes, j, L).bit_count() for j in range(len(masks) + 1)
    )
    return ThetaProfile(counts)


# ---------------------------------------------------------------------------
# text interchange format


def parse_sequence_set(text: str) -> SequenceSet:
    """Parse the line-per-schedule text format.

    Lines hold only '0'/'1' characters; blank lines and lines starting
    with '#' are ignored; every schedule line must have the same length,
    which becomes the common period.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"line {lineno}: only '0'/'1' characters allowed")
        rows.append(line)
    if not rows:
        raise ValueError("no schedules found")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("all schedule lines must have equal length")
    return SequenceSet.from_strings(rows)


def format_sequence_set(sset: SequenceSet) -> str:
    """Render a set in the text format, one schedule per line."""
    return "".join(s.to_string() + "\n" for s in sset.sequences)
