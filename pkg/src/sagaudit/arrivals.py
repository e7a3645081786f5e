"""Remaining-alert estimation from historical cycles.

A RateProfile stores, per type and hourly bucket, the mean number of alerts
still to come after the bucket start.  estimate() turns that into a Poisson
mean plus the per-unit-budget coverage coefficient used by the LPs, with
knowledge rollback near the end of the cycle.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .records import SECONDS_PER_CYCLE

TAIL_MASS = 1e-9


class EmptyHistory(ValueError):
    pass


@dataclass(frozen=True)
class RateProfile:
    bucket_width: int
    remaining_mean: np.ndarray  # (n_types, n_buckets)

    @property
    def n_types(self):
        return self.remaining_mean.shape[0]

    @property
    def n_buckets(self):
        return self.remaining_mean.shape[1]


@dataclass(frozen=True)
class FutureEstimate:
    lam: np.ndarray            # Poisson mean of remaining alerts per type
    kappa: np.ndarray          # E[1/d; d>=1] / V, coverage per unit budget
    rollback_active: np.ndarray


def _pav_nonincreasing(y: np.ndarray) -> np.ndarray:
    """Pool-adjacent-violators projection onto non-increasing sequences."""
    vals, counts = [], []
    for v in y:
        vals.append(float(v))
        counts.append(1)
        # merge while the sequence increases
        while len(vals) > 1 and vals[-2] < vals[-1]:
            total = vals[-2] * counts[-2] + vals[-1] * counts[-1]
            counts[-2] += counts[-1]
            vals[-2] = total / counts[-2]
            vals.pop()
            counts.pop()
    return np.repeat(vals, counts)


def fit(history, n_types: int, bucket_width: int = 3600) -> RateProfile:
    """Estimate per-type remaining-count means from historical cycles.

    history: iterable of cycles, each an iterable of (timestamp, type_id)
    pairs or AlertEvent objects.
    """
    if SECONDS_PER_CYCLE % bucket_width != 0:
        raise ValueError("bucket_width must divide the cycle length")
    cycles = list(history)
    if not cycles:
        raise EmptyHistory("need at least one historical cycle")
    n_buckets = SECONDS_PER_CYCLE // bucket_width

    remaining = np.zeros((len(cycles), n_types, n_buckets))
    for ci, cycle in enumerate(cycles):
        counts = np.zeros((n_types, n_buckets))
        for ev in cycle:
            ts, tid = (ev.timestamp, ev.type_id) if hasattr(ev, "timestamp") else ev
            counts[int(tid), int(ts) // bucket_width] += 1
        # alerts at or after a bucket's start still count as remaining there
        remaining[ci] = counts[:, ::-1].cumsum(axis=1)[:, ::-1]
    means = remaining.mean(axis=0)
    for t in range(n_types):
        means[t] = _pav_nonincreasing(means[t])
    return RateProfile(bucket_width=bucket_width, remaining_mean=means)


@lru_cache(maxsize=4096)
def expected_inverse_count(lam: float) -> float:
    """E[1/d ; d >= 1] for d ~ Poisson(lam), truncated at tail mass < 1e-9."""
    if lam <= 0:
        return 0.0
    d_max = max(1, int(poisson.isf(TAIL_MASS, lam)) + 2)
    d = np.arange(1, d_max + 1)
    log_pmf = d * np.log(lam) - lam - gammaln(d + 1)
    return float(np.sum(np.exp(log_pmf) / d))


def estimate(profile: RateProfile, now: float, audit_cost,
             prev: FutureEstimate | None = None,
             rollback_threshold: float = 1.0,
             interpolation: str = "constant") -> FutureEstimate:
    """Remaining-alert estimate at time `now`, with knowledge rollback.

    When a type's mean drops below rollback_threshold and a previous
    estimate exists, the previous value is reused so end-of-cycle attacks
    gain no advantage.
    """
    if not 0 <= now < SECONDS_PER_CYCLE:
        raise ValueError(f"now={now} outside the cycle")
    audit_cost = np.atleast_1d(np.asarray(audit_cost, dtype=float))
    b = int(now // profile.bucket_width)
    if interpolation == "constant":
        lam = profile.remaining_mean[:, b].copy()
    elif interpolation == "linear":
        frac = (now - b * profile.bucket_width) / profile.bucket_width
        nxt = profile.remaining_mean[:, b + 1] if b + 1 < profile.n_buckets \
            else profile.remaining_mean[:, b]
        lam = (1 - frac) * profile.remaining_mean[:, b] + frac * nxt
    else:
        raise ValueError(f"unknown interpolation {interpolation!r}")

    rollback = np.zeros(profile.n_types, dtype=bool)
    kappa = np.empty(profile.n_types)
    for t in range(profile.n_types):
        if prev is not None and lam[t] < rollback_threshold:
            lam[t] = prev.lam[t]
            kappa[t] = prev.kappa[t]
            rollback[t] = True
        else:
            kappa[t] = expected_inverse_count(float(lam[t])) / audit_cost[t]
    return FutureEstimate(lam=lam, kappa=kappa, rollback_active=rollback)
