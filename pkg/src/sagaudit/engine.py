"""Online per-alert replay: estimate, solve, sample the signal, update budget.

One CycleState per cycle, single writer.  Signal sampling consumes exactly
one uniform draw per best-type alert, so traces are reproducible for a
given (stream, config, seed) regardless of evaluation order elsewhere.
"""

from dataclasses import dataclass, field

import numpy as np

from . import arrivals, equilibrium
from .records import AlertEvent, CycleState, PayoffStructure


class OutOfOrderAlert(ValueError):
    pass


@dataclass(frozen=True)
class DecisionRecord:
    alert_idx: int
    timestamp: float
    type_id: int
    best_type: int
    signal: str                # "warn", "silent", or "na" for non-best types
    cond_audit_prob: float
    deduction: float
    ossp_utility: float
    online_sse_utility: float
    remaining_budget: float


@dataclass
class CycleReport:
    cycle_id: int
    records: list
    offline_sse_utility: float
    mean_advantage: float      # mean of per-alert OSSP - online-SSE utility
    std_advantage: float
    realized_counts: np.ndarray


def signal_rng(seed: int, cycle_id: int) -> np.random.Generator:
    """Counter-based generator for the signal-sampling sub-stream."""
    return np.random.Generator(np.random.Philox(
        np.random.SeedSequence([int(seed), 1, int(cycle_id)])))


def start_cycle(total_budget: float, alpha: float,
                profile: arrivals.RateProfile) -> CycleState:
    """Reserve alpha * B for end-of-cycle repeat-request checks."""
    if total_budget < 0:
        raise ValueError("budget must be nonnegative")
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    return CycleState(remaining_budget=total_budget * (1.0 - alpha),
                      reserved_budget=total_budget * alpha)


def process_alert(state: CycleState, alert: AlertEvent,
                  payoffs: PayoffStructure, profile: arrivals.RateProfile,
                  rng: np.random.Generator, *,
                  rollback_threshold: float = 1.0,
                  interpolation: str = "constant") -> DecisionRecord:
    """Handle one alert; mutates and returns via the shared CycleState."""
    if alert.timestamp < state.clock:
        raise OutOfOrderAlert(
            f"alert at {alert.timestamp} precedes clock {state.clock}")
    est = arrivals.estimate(profile, alert.timestamp, payoffs.audit_cost,
                            prev=state.prev_estimate,
                            rollback_threshold=rollback_threshold,
                            interpolation=interpolation)
    ossp = equilibrium.solve_ossp(payoffs, est, state.remaining_budget)
    # the comparison SSE plays with available + reserved budget (fairness:
    # the reserve only exists because of the signaling mechanism)
    sse = equilibrium.solve_online_sse(
        payoffs, est, state.remaining_budget + state.reserved_budget)

    t = alert.type_id
    cost = payoffs.audit_cost[t]
    draw = None
    if t == ossp.best_type:
        scheme = ossp.scheme
        warn_mass = scheme.p1[t] + scheme.q1[t]
        draw = rng.random()
        if warn_mass > 0 and draw < warn_mass:
            signal = "warn"
            cond = scheme.p1[t] / warn_mass
        else:
            signal = "silent"
            silent_mass = scheme.p0[t] + scheme.q0[t]
            cond = scheme.p0[t] / silent_mass if silent_mass > 0 else 0.0
    else:
        signal = "na"
        cond = sse.coverage[t]
    # the recorded deduction is the actual budget decrease (clamped at zero)
    deduction = min(cond * cost, state.remaining_budget)

    state.remaining_budget = max(0.0, state.remaining_budget - deduction)
    state.clock = alert.timestamp
    state.prev_estimate = est
    record = DecisionRecord(
        alert_idx=len(state.decisions), timestamp=alert.timestamp,
        type_id=t, best_type=ossp.best_type, signal=signal,
        cond_audit_prob=float(cond), deduction=float(deduction),
        ossp_utility=ossp.auditor_utility,
        online_sse_utility=sse.auditor_utility,
        remaining_budget=state.remaining_budget)
    state.decisions.append(record)
    return record


def run_cycle(stream, payoffs: PayoffStructure, profile: arrivals.RateProfile,
              total_budget: float, alpha: float, seed: int, *,
              cycle_id: int = 0, rollback_threshold: float = 1.0,
              interpolation: str = "constant") -> CycleReport:
    """Replay one cycle of alerts and report the per-alert utility trace."""
    stream = list(stream)
    counts = np.zeros(payoffs.n_types)
    for ev in stream:
        counts[ev.type_id] += 1
    if counts.sum() > 0:
        offline = equilibrium.solve_offline_sse(payoffs, counts, total_budget)
        offline_utility = offline.auditor_utility
    else:
        offline_utility = 0.0

    state = start_cycle(total_budget, alpha, profile)
    rng = signal_rng(seed, cycle_id)
    for ev in stream:
        process_alert(state, ev, payoffs, profile, rng,
                      rollback_threshold=rollback_threshold,
                      interpolation=interpolation)
    diffs = np.array([r.ossp_utility - r.online_sse_utility
                      for r in state.decisions])
    return CycleReport(
        cycle_id=cycle_id, records=list(state.decisions),
        offline_sse_utility=float(offline_utility),
        mean_advantage=float(diffs.mean()) if diffs.size else 0.0,
        std_advantage=float(diffs.std()) if diffs.size else 0.0,
        realized_counts=counts)
