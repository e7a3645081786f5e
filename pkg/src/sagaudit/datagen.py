"""Synthetic alert-log generation matched to daily per-type statistics."""

from dataclasses import dataclass, field

import numpy as np

from .records import AlertEvent


class InvalidSpec(ValueError):
    pass


def default_hourly_shape() -> np.ndarray:
    """Working-hours plateau: ~80% of alerts between 8:00 and 17:00."""
    shape = np.full(24, 0.2 / 15)
    shape[8:17] = 0.8 / 9
    return shape


@dataclass(frozen=True)
class ArrivalSpec:
    """Daily count moments per type plus the within-day hourly profile."""

    daily_mean: np.ndarray
    daily_std: np.ndarray
    hourly_shape: np.ndarray = field(default_factory=default_hourly_shape)

    def __post_init__(self):
        for name in ("daily_mean", "daily_std", "hourly_shape"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)
        if self.daily_mean.size != self.daily_std.size:
            raise InvalidSpec("mean/std length mismatch")
        if np.any(self.daily_mean < 0) or np.any(self.daily_std < 0):
            raise InvalidSpec("daily moments must be nonnegative")
        if self.hourly_shape.size != 24 or np.any(self.hourly_shape < 0) \
                or self.hourly_shape.sum() <= 0:
            raise InvalidSpec("hourly shape must be 24 nonnegative weights")

    @property
    def n_types(self):
        return self.daily_mean.size


def generate_cycles(spec: ArrivalSpec, n_cycles: int, seed: int):
    """Draw n_cycles of synthetic alert logs.

    Counts come from a normal truncated at zero and rounded; timestamps
    follow the hourly shape with uniform jitter within the hour.  The same
    seed always yields the same cycles.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    probs = spec.hourly_shape / spec.hourly_shape.sum()
    cycles = []
    for _ in range(n_cycles):
        events = []
        for t in range(spec.n_types):
            if spec.daily_mean[t] == 0 and spec.daily_std[t] == 0:
                continue
            count = int(round(max(0.0, rng.normal(spec.daily_mean[t],
                                                  spec.daily_std[t]))))
            if count == 0:
                continue
            hours = rng.choice(24, size=count, p=probs)
            ts = hours * 3600 + rng.integers(0, 3600, size=count)
            events.extend(AlertEvent(timestamp=float(s), type_id=t)
                          for s in ts)
        events.sort(key=lambda e: (e.timestamp, e.type_id))
        cycles.append(events)
    return cycles
