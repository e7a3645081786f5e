"""Signaling audit game solver and replay simulator.

Per-alert optimal warn/audit distributions for an auditor facing
strategic insiders, plus online and offline audit-only baselines, a
brute-force verification oracle, synthetic data generation, and a
replay engine that simulates whole audit cycles against alert logs.
"""

from .arrivals import FutureEstimate, RateProfile, estimate, expected_inverse_count, fit
from .config import RunConfig, default_config, load_config, with_overrides
from .datagen import ArrivalSpec, default_hourly_shape, generate_cycles
from .engine import CycleReport, DecisionRecord, process_alert, run_cycle, start_cycle
from .equilibrium import (
    no_silent_audit_condition,
    solve_offline_sse,
    solve_online_sse,
    solve_ossp,
)
from .oracle import grid_best_coverage, grid_best_scheme, verify_properties
from .records import (
    AlertEvent,
    CycleState,
    EquilibriumSolution,
    PayoffStructure,
    SignalingScheme,
)

__version__ = "0.1.0"

__all__ = [
    "AlertEvent",
    "ArrivalSpec",
    "CycleReport",
    "CycleState",
    "DecisionRecord",
    "EquilibriumSolution",
    "FutureEstimate",
    "PayoffStructure",
    "RateProfile",
    "RunConfig",
    "SignalingScheme",
    "default_config",
    "default_hourly_shape",
    "estimate",
    "expected_inverse_count",
    "fit",
    "generate_cycles",
    "grid_best_coverage",
    "grid_best_scheme",
    "load_config",
    "no_silent_audit_condition",
    "process_alert",
    "run_cycle",
    "solve_offline_sse",
    "solve_online_sse",
    "solve_ossp",
    "start_cycle",
    "verify_properties",
    "with_overrides",
]
