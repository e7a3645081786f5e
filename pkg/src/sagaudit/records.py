"""Domain records for the signaling audit game.

Everything here is a plain value object.  Payoff tables are validated
eagerly: wrong sign patterns are hard errors, not warnings.
"""

from dataclasses import dataclass, field

import numpy as np

PROB_EPS = 1e-9
SECONDS_PER_CYCLE = 86400


class ZeroMass(ValueError):
    """Conditional utility requested on a zero-probability signal branch."""


class InvalidPayoffs(ValueError):
    pass


class InvalidScheme(ValueError):
    pass


@dataclass(frozen=True)
class PayoffStructure:
    """Per-type payoffs plus audit cost and warning-quit parameters.

    Sign conventions: the attacker loses when audited and gains when not
    (u_ac < 0 < u_au); the auditor gains (weakly) from a catch and loses
    from a miss (u_dc >= 0 > u_du).
    """

    u_dc: np.ndarray
    u_du: np.ndarray
    u_ac: np.ndarray
    u_au: np.ndarray
    audit_cost: np.ndarray
    quit_prob: np.ndarray
    quit_loss: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("u_dc", "u_du", "u_ac", "u_au", "audit_cost",
                     "quit_prob", "quit_loss"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            arrays[name] = arr
            object.__setattr__(self, name, arr)
        n = arrays["u_dc"].size
        if n < 1:
            raise InvalidPayoffs("need at least one alert type")
        for name, arr in arrays.items():
            if arr.size != n:
                raise InvalidPayoffs(f"{name} length {arr.size} != {n}")
        if not (np.all(self.u_ac < 0) and np.all(self.u_au > 0)):
            raise InvalidPayoffs("require u_ac < 0 < u_au for every type")
        if not (np.all(self.u_dc >= 0) and np.all(self.u_du < 0)):
            raise InvalidPayoffs("require u_dc >= 0 > u_du for every type")
        if not np.all(self.audit_cost > 0):
            raise InvalidPayoffs("audit_cost must be positive")
        if not (np.all(self.quit_prob >= 0) and np.all(self.quit_prob <= 1)):
            raise InvalidPayoffs("quit_prob must lie in [0, 1]")
        if not np.all(self.quit_loss <= 0):
            raise InvalidPayoffs("quit_loss must be <= 0")

    @property
    def n_types(self) -> int:
        return self.u_dc.size


@dataclass(frozen=True)
class SignalingScheme:
    """Joint warn/audit distribution per type, plus the budget split."""

    p1: np.ndarray
    q1: np.ndarray
    p0: np.ndarray
    q0: np.ndarray
    budget_split: np.ndarray

    def __post_init__(self):
        for name in ("p1", "q1", "p0", "q0", "budget_split"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)
        n = self.p1.size
        for name in ("q1", "p0", "q0", "budget_split"):
            if getattr(self, name).size != n:
                raise InvalidScheme(f"{name} length mismatch")
        probs = np.stack([self.p1, self.q1, self.p0, self.q0])
        if np.any(probs < -PROB_EPS) or np.any(probs > 1 + PROB_EPS):
            raise InvalidScheme("signal probabilities must lie in [0, 1]")
        closure = probs.sum(axis=0)
        if np.any(np.abs(closure - 1.0) > PROB_EPS):
            raise InvalidScheme("p1 + q1 + p0 + q0 must equal 1 per type")
        if np.any(self.budget_split < -PROB_EPS):
            raise InvalidScheme("budget split must be nonnegative")

    @property
    def coverage(self) -> np.ndarray:
        """Marginal audit probability per type, P(X_c) = p1 + p0."""
        return self.p1 + self.p0

    @property
    def warn_prob(self) -> np.ndarray:
        return self.p1 + self.q1


@dataclass(frozen=True)
class AlertEvent:
    timestamp: float
    type_id: int

    def __post_init__(self):
        if not 0 <= self.timestamp < SECONDS_PER_CYCLE:
            raise ValueError(f"timestamp {self.timestamp} outside the cycle")
        if self.type_id < 0:
            raise ValueError("type_id must be nonnegative")


@dataclass
class CycleState:
    """Mutable per-cycle state; single-writer by construction."""

    remaining_budget: float
    reserved_budget: float
    clock: float = 0.0
    decisions: list = field(default_factory=list)
    prev_estimate: object = None


@dataclass(frozen=True)
class EquilibriumSolution:
    coverage: np.ndarray
    best_type: int
    auditor_utility: float
    attacker_utility: float
    scheme: SignalingScheme | None = None


def attacker_cond_utility(p: float, q: float, payoffs: PayoffStructure,
                          type_id: int) -> float:
    """Attacker's expected utility conditioned on one signal branch."""
    mass = p + q
    if mass <= 0:
        raise ZeroMass("signal branch has zero probability mass")
    return (p * payoffs.u_ac[type_id] + q * payoffs.u_au[type_id]) / mass


def auditor_expected_utility(scheme: SignalingScheme, payoffs: PayoffStructure,
                             best_type: int, warn_cost_weights) -> float:
    """Auditor objective: silent-branch mix for the best type plus the
    accumulated usability cost of warnings across all types."""
    w = np.asarray(warn_cost_weights, dtype=float)
    value = (scheme.p0[best_type] * payoffs.u_dc[best_type]
             + scheme.q0[best_type] * payoffs.u_du[best_type])
    return float(value + np.sum((scheme.p1 + scheme.q1) * w))
