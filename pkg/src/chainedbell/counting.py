"""Estimators from raw counts.

Given the per-group singles and coincidence rates of a chained-Bell run, this
module computes the correlated-outcome probability of each group, the
analyzer bias ``nu``, the chained correlation statistic ``I``, the predictive
bound ``delta = I/2 + nu``, and Monte Carlo uncertainties under Poissonian
resampling of every raw count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._seeds import derived_rng
from .errors import (
    DegenerateGroupError,
    IncompleteDataError,
    InvalidInputError,
)
from .settings import ChainedPlan, CoincidenceGroup

__all__ = [
    "GroupCounts",
    "GroupEstimate",
    "ChainedEstimate",
    "correlated_probability",
    "group_bias",
    "bias_nu",
    "chained_I",
    "delta_from",
    "mc_uncertainty",
    "estimate_chained",
]

_MIN_RESAMPLES = 100


@dataclass(frozen=True)
class GroupCounts:
    """Raw data of one coincidence group.

    ``coincidences`` and ``singles_a`` are keyed by the group's four member
    pairs ``(m, n)``; the singles value of a row is the Alice-side detection
    rate while the analyzers sat at ``(m, n)``.  Values are average rates in
    counts/second; the durations convert them back to integer totals where
    needed (Monte Carlo resampling).
    """

    group: CoincidenceGroup
    coincidences: dict[tuple[int, int], float]
    singles_a: dict[tuple[int, int], float]
    duration_coinc_s: float
    duration_singles_s: float

    def __post_init__(self) -> None:
        expected = set(self.group.member_pairs)
        got = set(self.coincidences)
        if got != expected:
            missing = sorted(expected - got)
            extra = sorted(got - expected)
            raise IncompleteDataError(
                f"group {self.group.key}: coincidence slots mismatch "
                f"(missing {missing}, unexpected {extra})"
            )
        if not set(self.singles_a) <= expected:
            raise IncompleteDataError(
                f"group {self.group.key}: singles recorded for pairs outside the group"
            )
        for mapping, kind in ((self.coincidences, "coincidence"),
                              (self.singles_a, "singles")):
            for pair, value in mapping.items():
                if value < 0 or not math.isfinite(value):
                    raise InvalidInputError(
                        f"group {self.group.key}: negative or non-finite {kind} "
                        f"rate {value} at {pair}"
                    )
        for duration in (self.duration_coinc_s, self.duration_singles_s):
            if duration <= 0 or not math.isfinite(duration):
                raise InvalidInputError(
                    f"group {self.group.key}: durations must be positive, got "
                    f"{self.duration_coinc_s}/{self.duration_singles_s}"
                )


@dataclass(frozen=True)
class GroupEstimate:
    """Per-group summary: correlated probability and analyzer bias."""

    a: int
    b: int
    probability: float
    bias: float


@dataclass(frozen=True)
class ChainedEstimate:
    """Point estimates (and optional Monte Carlo uncertainties) of one run."""

    n_bases: int
    i_n: float
    nu_n: float
    delta_n: float
    sigma_i: float | None
    sigma_nu: float | None
    sigma_delta: float | None
    per_group: tuple[GroupEstimate, ...]


def correlated_probability(counts: GroupCounts) -> float:
    """Fraction of the group's coincidences that fell in the correlated slots.

    ``[M(a,b) + M(a+2N,b+2N)] / [sum of all four slots]``.
    """
    g = counts.group
    shift_pair = g.member_pairs[3]  # (a+2N, b+2N)
    base_pair = g.member_pairs[0]   # (a, b)
    total = sum(counts.coincidences.values())
    if total <= 0:
        raise DegenerateGroupError(
            f"group {g.key}: all four coincidence slots are zero"
        )
    return (counts.coincidences[base_pair] + counts.coincidences[shift_pair]) / total


def group_bias(counts: GroupCounts) -> float:
    """Analyzer bias of one group.

    Averages the two singles rates recorded at Alice index ``a`` and the two
    at its antipode ``a+2N``, then returns ``|M(a) - M(a+2N)| / (2(M(a) +
    M(a+2N)))``.  This row pairing reproduces the per-group bias column of
    the bundled reference dataset.
    """
    g = counts.group
    if set(counts.singles_a) != set(g.member_pairs):
        missing = sorted(set(g.member_pairs) - set(counts.singles_a))
        raise IncompleteDataError(
            f"group {g.key}: missing singles for pairs {missing}"
        )
    base = [v for (m, _n), v in counts.singles_a.items() if m == g.a]
    anti = [v for (m, _n), v in counts.singles_a.items() if m != g.a]
    m_base = sum(base) / len(base)
    m_anti = sum(anti) / len(anti)
    total = m_base + m_anti
    if total <= 0:
        raise DegenerateGroupError(f"group {g.key}: zero singles totals")
    return 0.5 * abs(m_base - m_anti) / total


def _groups_by_key(plan: ChainedPlan,
                   groups: list[GroupCounts]) -> dict[tuple[int, int], GroupCounts]:
    by_key: dict[tuple[int, int], GroupCounts] = {}
    for counts in groups:
        key = counts.group.key
        if key in by_key:
            raise InvalidInputError(f"duplicate data for group {key}")
        by_key[key] = counts
    missing = [g.key for g in plan.groups if g.key not in by_key]
    if missing:
        raise IncompleteDataError(f"missing groups {missing}")
    return by_key


def bias_nu(plan: ChainedPlan,
            groups: list[GroupCounts]) -> tuple[float, dict[tuple[int, int], float]]:
    """Overall bias ``nu`` (the maximum per-group bias) and a per-group table."""
    by_key = _groups_by_key(plan, groups)
    per_group = {key: group_bias(counts) for key, counts in by_key.items()}
    return max(per_group.values()), per_group


def chained_I(plan: ChainedPlan, groups: list[GroupCounts]) -> float:
    """The chained statistic ``I = P(0, 2N-1) + sum over neighbors of (1 - P(a,b))``."""
    by_key = _groups_by_key(plan, groups)
    total = 0.0
    for g in plan.groups:
        p = correlated_probability(by_key[g.key])
        total += p if g.is_correlated_term else (1.0 - p)
    return total


def delta_from(i_value: float, nu_value: float) -> float:
    """The predictive-power bound ``delta = I/2 + nu``."""
    if i_value < 0:
        raise InvalidInputError(f"I must be nonnegative, got {i_value}")
    if not 0.0 <= nu_value <= 0.5:
        raise InvalidInputError(f"nu must be in [0, 1/2], got {nu_value}")
    return i_value / 2.0 + nu_value


def _integer_totals(plan: ChainedPlan, groups: list[GroupCounts]
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Observed totals = round(rate * duration), slot-ordered per plan group."""
    by_key = _groups_by_key(plan, groups)
    coinc = np.empty((len(plan.groups), 4))
    singles = np.empty((len(plan.groups), 4))
    for gi, g in enumerate(plan.groups):
        counts = by_key[g.key]
        if set(counts.singles_a) != set(g.member_pairs):
            raise IncompleteDataError(
                f"group {g.key}: Monte Carlo needs singles on all four rows"
            )
        for si, pair in enumerate(g.member_pairs):
            coinc[gi, si] = round(counts.coincidences[pair] * counts.duration_coinc_s)
            singles[gi, si] = round(counts.singles_a[pair] * counts.duration_singles_s)
    return coinc, singles


def _resample_statistics(coinc: np.ndarray, singles: np.ndarray,
                         correlated_row: int) -> tuple[float, float]:
    """(I, nu) of one resampled count table (groups x 4 slots, plan slot order)."""
    totals = coinc.sum(axis=1)
    if np.any(totals <= 0):
        raise DegenerateGroupError("a resampled group has zero total coincidences")
    p = (coinc[:, 0] + coinc[:, 3]) / totals
    i_value = p[correlated_row] + float(np.sum(1.0 - np.delete(p, correlated_row)))
    # slots 0,1 carry Alice index a; slots 2,3 its antipode
    m_base = 0.5 * (singles[:, 0] + singles[:, 1])
    m_anti = 0.5 * (singles[:, 2] + singles[:, 3])
    denom = m_base + m_anti
    if np.any(denom <= 0):
        raise DegenerateGroupError("a resampled group has zero singles totals")
    nu_value = float(np.max(0.5 * np.abs(m_base - m_anti) / denom))
    return i_value, nu_value


def mc_uncertainty(plan: ChainedPlan, groups: list[GroupCounts],
                   resamples: int, master_seed: int) -> tuple[float, float, float]:
    """Monte Carlo standard deviations ``(sigma_I, sigma_nu, sigma_delta)``.

    Every raw count (all coincidence slots and all singles rows) is resampled
    as an independent Poisson variate whose mean is the observed integer
    total, and the three estimators are recomputed per resample.  Resample
    ``k`` draws from a generator derived from ``(master_seed, k)``, so the
    result does not depend on scheduling or chunking.
    """
    if resamples < _MIN_RESAMPLES:
        raise InvalidInputError(
            f"resamples must be at least {_MIN_RESAMPLES}, got {resamples}"
        )
    coinc_mean, singles_mean = _integer_totals(plan, groups)
    correlated_row = next(
        i for i, g in enumerate(plan.groups) if g.is_correlated_term
    )
    i_samples = np.empty(resamples)
    nu_samples = np.empty(resamples)
    for k in range(resamples):
        rng = derived_rng(master_seed, k)
        coinc = rng.poisson(coinc_mean)
        singles = rng.poisson(singles_mean)
        i_samples[k], nu_samples[k] = _resample_statistics(
            coinc, singles, correlated_row
        )
    delta_samples = i_samples / 2.0 + nu_samples
    return (
        float(np.std(i_samples, ddof=1)),
        float(np.std(nu_samples, ddof=1)),
        float(np.std(delta_samples, ddof=1)),
    )


def estimate_chained(plan: ChainedPlan, groups: list[GroupCounts], *,
                     resamples: int = 0, master_seed: int = 0) -> ChainedEstimate:
    """Full estimate record; pass ``resamples >= 100`` to add MC uncertainties."""
    by_key = _groups_by_key(plan, groups)
    per_group = tuple(
        GroupEstimate(
            a=g.a,
            b=g.b,
            probability=correlated_probability(by_key[g.key]),
            bias=group_bias(by_key[g.key]),
        )
        for g in plan.groups
    )
    i_value = chained_I(plan, groups)
    nu_value, _ = bias_nu(plan, groups)
    sigma_i = sigma_nu = sigma_delta = None
    if resamples:
        sigma_i, sigma_nu, sigma_delta = mc_uncertainty(
            plan, groups, resamples, master_seed
        )
    return ChainedEstimate(
        n_bases=plan.n_bases,
        i_n=i_value,
        nu_n=nu_value,
        delta_n=delta_from(i_value, nu_value),
        sigma_i=sigma_i,
        sigma_nu=sigma_nu,
        sigma_delta=sigma_delta,
        per_group=per_group,
    )
