"""Random-shift Monte-Carlo experiments and a session-level decoding model.

Two experiment schemes are provided.  Under ``protocol_sequences`` each
run draws one uniform shift per user and measures every user's exact
per-period throughput; a throughput-invariant set shows zero spread
across runs.  Under ``random_access`` each user instead transmits in
every slot independently with probability equal to its duty factor,
which is the natural memoryless baseline at the same load.

The session simulator models the receive chain one level up: any slot
with at most gamma transmitters delivers all its packets with readable
headers (user identity plus a one-bit period parity), any busier slot
erases them, and a user's period decodes when at least the guaranteed
number of its packets survive.  Coding internals are abstracted to that
threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log2

import numpy as np

from .core import ProtoseqError, SequenceSet, ShiftsLike, as_shifts
from .analysis import DEFAULT_BUDGET, is_ti
from .throughput import ti_throughput

__all__ = [
    "RNG_NAME",
    "SessionConfigError",
    "SimConfig",
    "UserStats",
    "SimResult",
    "SessionPacket",
    "PeriodOutcome",
    "ErasureCodeSpec",
    "SessionReport",
    "run_monte_carlo",
    "run_session",
]

#: Counter-based generator used for every experiment; splittable, with
#: published constants, so results are reproducible from the seed alone.
RNG_NAME = "philox4x64"

# exact joint sampling of per-slot transmit patterns is used up to this
# many users; beyond it the sampler falls back to slot-by-slot draws
_PATTERN_USER_LIMIT = 12
_SLOT_BATCH = 1 << 22


class SessionConfigError(ProtoseqError):
    """The set cannot back the requested session configuration."""


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one Monte-Carlo experiment."""

    gamma: int
    runs: int
    seed: int
    horizon: int = 1  # periods measured per run
    scheme: str = "protocol_sequences"

    def __post_init__(self) -> None:
        if self.gamma < 1:
            raise ValueError("gamma must be at least 1")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.scheme not in ("protocol_sequences", "random_access"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True)
class UserStats:
    """Exact spread of one user's empirical throughput across runs."""

    minimum: Fraction
    mean: Fraction
    maximum: Fraction


@dataclass(frozen=True)
class SimResult:
    scheme: str
    gamma: int
    runs: int
    horizon: int
    seed: int
    rng: str
    samples_per_run: int  # slots measured in each run
    per_user: tuple[UserStats, ...]


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _stats_from_counts(counts: np.ndarray, denom: int) -> tuple[UserStats, ...]:
    """Exact per-user stats from integer success counts of shape (runs, K)."""
    runs = counts.shape[0]
    out = []
    for i in range(counts.shape[1]):
        col = counts[:, i]
        out.append(
            UserStats(
                minimum=Fraction(int(col.min()), denom),
                mean=Fraction(int(col.sum()), runs * denom),
                maximum=Fraction(int(col.max()), denom),
            )
        )
    return tuple(out)


def _protocol_counts(sset: SequenceSet, cfg: SimConfig) -> np.ndarray:
    from .core import rotate_mask
    from .analysis import success_counts

    K = sset.size
    L = sset.period
    rng = _generator(cfg.seed)
    shifts = rng.integers(0, L, size=(cfg.runs, K))
    tables = [tuple(rotate_mask(m, t, L) for t in range(L)) for m in sset.masks]
    counts = np.empty((cfg.runs, K), dtype=np.int64)
    for r in range(cfg.runs):
        row = shifts[r]
        masks = [tables[i][row[i]] for i in range(K)]
        counts[r] = success_counts(masks, cfg.gamma, L)
    return counts


def _random_access_counts(sset: SequenceSet, cfg: SimConfig) -> np.ndarray:
    K = sset.size
    L = sset.period
    slots = cfg.horizon * L
    rng = _generator(cfg.seed)
    duty = np.array([float(f) for f in sset.duty_factors])
    if K <= _PATTERN_USER_LIMIT:
        # the per-slot transmit pattern is i.i.d. across slots, so the
        # pattern counts of a run are one multinomial draw; this samples
        # the exact joint distribution of all users' success counts
        patterns = 1 << K
        idx = np.arange(patterns)
        member = ((idx[:, None] >> np.arange(K)) & 1).astype(bool)
        weight = member.sum(axis=1)
        pvals = np.prod(np.where(member, duty, 1.0 - duty), axis=1)
        pvals = pvals / pvals.sum()
        success = member & (weight <= cfg.gamma)[:, None]
        draws = rng.multinomial(slots, pvals, size=cfg.runs)
        return draws @ success.astype(np.int64)
    counts = np.zeros((cfg.runs, K), dtype=np.int64)
    batch_runs = max(1, _SLOT_BATCH // (K * slots))
    start = 0
    while start < cfg.runs:
        stop = min(cfg.runs, start + batch_runs)
        fires = rng.random((stop - start, K, slots)) < duty[None, :, None]
        totals = fires.sum(axis=1)
        ok = totals <= cfg.gamma
        counts[start:stop] = (fires & ok[:, None, :]).sum(axis=2)
        start = stop
    return counts


def run_monte_carlo(sset: SequenceSet, cfg: SimConfig) -> SimResult:
    """Measure per-user throughput spread across seeded random runs.

    Protocol-sequence runs draw shifts and are measured over one period
    (the schedule makes longer horizons identical slot for slot); the
    random-access baseline is measured over ``horizon`` periods' worth
    of slots.  Results are deterministic for a fixed seed.
    """
    K = sset.size
    if not 1 <= cfg.gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    L = sset.period
    if cfg.scheme == "protocol_sequences":
        counts = _protocol_counts(sset, cfg)
        denom = L
    else:
        counts = _random_access_counts(sset, cfg)
        denom = cfg.horizon * L
    return SimResult(
        scheme=cfg.scheme,
        gamma=cfg.gamma,
        runs=cfg.runs,
        horizon=cfg.horizon,
        seed=cfg.seed,
        rng=RNG_NAME,
        samples_per_run=cfg.horizon * L,
        per_user=_stats_from_counts(counts, denom),
    )


# ---------------------------------------------------------------------------
# session-level decoding


@dataclass(frozen=True)
class SessionPacket:
    """Header of one delivered packet, as the receiver reads it."""

    user_id: int
    period_parity: int
    payload_index: int


@dataclass(frozen=True)
class PeriodOutcome:
    """Decode outcome for one complete period of one user."""

    user_id: int
    period_index: int
    parity: int
    sent: int
    survived: int
    success: bool


@dataclass(frozen=True)
class ErasureCodeSpec:
    """Per-user coding threshold: packets sent per period and the minimum
    number of survivors needed to decode the period."""

    packets_per_period: tuple[int, ...]
    required_per_period: tuple[int, ...]

    @classmethod
    def from_set(cls, sset: SequenceSet, gamma: int) -> "ErasureCodeSpec":
        """Derive the code from the set's guaranteed throughput.

        The survivor guarantee is the period times the closed-form
        throughput; if that is not an integer the set cannot be
        throughput-invariant at this capability and the configuration is
        rejected.
        """
        report = ti_throughput(sset.duty_factors, gamma)
        L = sset.period
        sent = tuple(s.ones for s in sset.sequences)
        required = []
        for i, r in enumerate(report.per_user):
            guaranteed = r * L
            if guaranteed.denominator != 1:
                raise SessionConfigError(
                    f"user {i + 1}: guaranteed survivors per period is "
                    f"{guaranteed}, not an integer; the set is not "
                    f"throughput-invariant at gamma={gamma}"
                )
            required.append(int(guaranteed))
        return cls(sent, tuple(required))


@dataclass(frozen=True)
class SessionReport:
    gamma: int
    periods: int
    seed: int | None
    rng: str
    shifts: tuple[int, ...]
    header_bits: int
    code: ErasureCodeSpec
    per_user: tuple[tuple[PeriodOutcome, ...], ...]
    receiver_groups_consistent: bool

    @property
    def all_decoded(self) -> bool:
        return all(o.success for outcomes in self.per_user for o in outcomes)

    def success_rate(self, user_id: int) -> Fraction:
        outcomes = self.per_user[user_id - 1]
        if not outcomes:
            return Fraction(1)
        return Fraction(sum(o.success for o in outcomes), len(outcomes))


def run_session(
    sset: SequenceSet,
    gamma: int,
    periods: int,
    seed: int | None = 0,
    shifts: ShiftsLike | None = None,
    trust_ti: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> SessionReport:
    """Simulate identification and threshold decoding over whole periods.

    One session draws (or takes) a shift per user and plays ``periods``
    periods of slots.  Slots with at most gamma transmitters deliver
    their packets; the receiver groups each user's delivered packets by
    runs of the header parity bit and decodes a period when one group
    holds enough survivors from it.  Only complete periods inside the
    horizon are judged.  Unless ``trust_ti`` is set, the set is first
    verified to be throughput-invariant at ``gamma``.
    """
    K = sset.size
    L = sset.period
    if not 1 <= gamma < K:
        raise ValueError(f"gamma must satisfy 1 <= gamma < K={K}")
    if periods < 1:
        raise ValueError("periods must be at least 1")
    if shifts is None:
        if seed is None:
            raise ValueError("either shifts or a seed is required")
        if seed < 0:
            raise ValueError("seed must be non-negative")
        taus = tuple(int(x) for x in _generator(seed).integers(0, L, size=K))
    else:
        taus = as_shifts(shifts, L, K)
    if not trust_ti:
        verdict = is_ti(sset, gamma, budget=budget)
        if not verdict.holds:
            raise SessionConfigError(
                f"set is not throughput-invariant at gamma={gamma}; "
                f"witness {verdict.witness}"
            )
    code = ErasureCodeSpec.from_set(sset, gamma)
    header_bits = 1 + ceil(log2(K)) if K > 1 else 1

    # per-slot transmitter totals repeat with the common period
    bit_rows = [s.bits for s in sset.sequences]
    totals = [
        sum(bit_rows[u][(t + taus[u]) % L] for u in range(K)) for t in range(L)
    ]

    # delivered packets per user, in slot order, with ground-truth period
    delivered: list[list[tuple[SessionPacket, int, int]]] = [[] for _ in range(K)]
    for u in range(K):
        bits = bit_rows[u]
        tau = taus[u]
        current_period = -1
        payload_index = 0
        for t in range(periods * L):
            if not bits[(t + tau) % L]:
                continue
            p = (t + tau) // L
            if p != current_period:
                current_period = p
                payload_index = 0
            if totals[t % L] <= gamma:
                packet = SessionPacket(
                    user_id=u + 1, period_parity=p % 2, payload_index=payload_index
                )
                delivered[u].append((packet, t, p))
            payload_index += 1

    # receiver-side grouping by parity runs; a group should cover exactly
    # one true period, which holds whenever no period loses every packet
    groups_consistent = True
    decoded: list[set[int]] = [set() for _ in range(K)]
    for u in range(K):
        run: list[tuple[SessionPacket, int, int]] = []
        runs: list[list[tuple[SessionPacket, int, int]]] = []
        for item in delivered[u]:
            if run and item[0].period_parity != run[-1][0].period_parity:
                runs.append(run)
                run = []
            run.append(item)
        if run:
            runs.append(run)
        for group in runs:
            true_periods = {p for _, _, p in group}
            if len(true_periods) != 1:
                groups_consistent = False
                continue  # mixed codewords cannot decode
            p = true_periods.pop()
            if len(group) >= code.required_per_period[u]:
                decoded[u].add(p)

    per_user = []
    for u in range(K):
        first = 0 if taus[u] == 0 else 1
        outcomes = []
        for p in range(first, periods):
            survived = sum(1 for _, _, q in delivered[u] if q == p)
            success = (
                code.required_per_period[u] == 0 or p in decoded[u]
            )
            outcomes.append(
                PeriodOutcome(
                    user_id=u + 1,
                    period_index=p,
                    parity=p % 2,
                    sent=code.packets_per_period[u],
                    survived=survived,
                    success=success,
                )
            )
        per_user.append(tuple(outcomes))

    return SessionReport(
        gamma=gamma,
        periods=periods,
        seed=seed if shifts is None else None,
        rng=RNG_NAME,
        shifts=taus,
        header_bits=header_bits,
        code=code,
        per_user=tuple(per_user),
        receiver_groups_consistent=groups_consistent,
    )
