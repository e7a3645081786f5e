"""Equilibrium computations via best-response enumeration over LPs.

Three solvers share the same skeleton: for every attackable type, assume it
is the attacker's best response, solve an LP for the auditor's optimal
commitment, and keep the candidate with the best auditor objective (lowest
type id on ties, for deterministic replays).

Each winning candidate is re-solved once with the objective pinned while
total allocated budget is minimized.  That second stage selects, among the
optimal solutions, the one where the best-response constraint is tight for
every positively covered type; without it the coverage of non-best types is
an arbitrary vertex choice and the coverage-equality property would only
hold "in spirit".
"""

import numpy as np

from . import lp
from .records import EquilibriumSolution, PayoffStructure, SignalingScheme

OBJ_TIE_TOL = 1e-9
_OBJ_PIN_SLACK = 1e-9


class NoFeasibleType(RuntimeError):
    """Internal error: every candidate best-response LP was infeasible."""


class DegenerateDenominator(ZeroDivisionError):
    pass


def _warn_cost_weights(payoffs: PayoffStructure, lam: np.ndarray) -> np.ndarray:
    """Usability cost per unit of warning probability: P^t * E^t * C_t."""
    return payoffs.quit_prob * lam * payoffs.quit_loss


def _best_candidate(results):
    """(objective, type_id, x) with max objective, lowest id on ties."""
    best = None
    for obj, tid, x in results:
        if best is None or obj > best[0] + OBJ_TIE_TOL:
            best = (obj, tid, x)
    return best


def _minimize_budget(program: lp.LinearProgram, obj_value: float,
                     budget_cols: np.ndarray) -> np.ndarray | None:
    """Re-solve with the objective pinned, minimizing total allocated budget."""
    c2 = np.zeros_like(program.c)
    c2[budget_cols] = -1.0
    # widen the pin only if numerical residue makes the tight version infeasible
    for scale in (_OBJ_PIN_SLACK, 1e-7, 1e-6):
        slack = scale * (1.0 + abs(obj_value))
        a_ub = np.vstack([program.a_ub, -program.c])
        b_ub = np.append(program.b_ub, -(obj_value - slack))
        refined = lp.LinearProgram(c2, a_ub=a_ub, b_ub=b_ub,
                                   a_eq=program.a_eq, b_eq=program.b_eq,
                                   bounds=program.bounds)
        out = lp.solve(refined)
        if out.is_optimal:
            return out.x
    return None


def _sse_program(payoffs, kappa, budget, cand, attackable):
    """LP over the budget split, candidate type `cand` forced best response.

    Dominance is only required over `attackable` types: a type that cannot
    occur is no best-response threat, and keeping its row can make every
    candidate LP infeasible (e.g. an unattackable type with the top u_au).
    """
    n = payoffs.n_types
    gain = kappa * (payoffs.u_ac - payoffs.u_au)  # d(attacker util)/dB per type
    c = np.zeros(n)
    c[cand] = kappa[cand] * (payoffs.u_dc[cand] - payoffs.u_du[cand])

    rows, rhs = [], []
    for t in attackable:
        if t == cand:
            continue
        row = np.zeros(n)
        row[t] = gain[t]
        row[cand] -= gain[cand]
        rows.append(row)
        rhs.append(payoffs.u_au[cand] - payoffs.u_au[t])
    for t in range(n):
        if kappa[t] > 0:  # coverage is a probability
            row = np.zeros(n)
            row[t] = kappa[t]
            rows.append(row)
            rhs.append(1.0)
    rows.append(np.ones(n))
    rhs.append(budget)
    return lp.LinearProgram(c, a_ub=np.array(rows), b_ub=np.array(rhs))


def _solve_sse_family(payoffs, kappa, budget, candidates):
    results = []
    for cand in candidates:
        program = _sse_program(payoffs, kappa, budget, cand, candidates)
        out = lp.solve(program)
        if not out.is_optimal:
            continue
        obj = out.objective_value + payoffs.u_du[cand]
        refined = _minimize_budget(program, out.objective_value,
                                   np.arange(payoffs.n_types))
        x = refined if refined is not None else out.x
        results.append((obj, cand, x))
    best = _best_candidate(results)
    if best is None:
        raise NoFeasibleType("all candidate best-response LPs infeasible")
    obj, cand, split = best
    coverage = np.clip(split * kappa, 0.0, 1.0)
    att = (coverage[cand] * payoffs.u_ac[cand]
           + (1 - coverage[cand]) * payoffs.u_au[cand])
    return EquilibriumSolution(coverage=coverage, best_type=int(cand),
                               auditor_utility=float(obj),
                               attacker_utility=float(att))


def solve_online_sse(payoffs: PayoffStructure, estimates,
                     budget: float) -> EquilibriumSolution:
    """Optimal audit-only commitment against the estimated future alerts."""
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    candidates = [t for t in range(payoffs.n_types) if estimates.lam[t] > 0]
    return _solve_sse_family(payoffs, estimates.kappa, budget, candidates)


def solve_offline_sse(payoffs: PayoffStructure, realized_counts,
                      budget: float) -> EquilibriumSolution:
    """SSE with deterministic coverage from realized full-cycle counts."""
    counts = np.atleast_1d(np.asarray(realized_counts, dtype=float))
    if np.any(counts < 0):
        raise ValueError("counts must be nonnegative")
    kappa = np.where(counts > 0, 1.0 / (payoffs.audit_cost * np.maximum(counts, 1)), 0.0)
    candidates = [t for t in range(payoffs.n_types) if counts[t] > 0]
    return _solve_sse_family(payoffs, kappa, budget, candidates)


def _ossp_program(payoffs, kappa, warn_weights, budget, cand, attackable):
    """Joint signaling/audit LP; variables [p1, q1, p0, q0, B] per type."""
    n = payoffs.n_types
    i_p1, i_q1, i_p0, i_q0, i_b = (np.arange(n) + k * n for k in range(5))

    c = np.zeros(5 * n)
    c[i_p0[cand]] = payoffs.u_dc[cand]
    c[i_q0[cand]] = payoffs.u_du[cand]
    c[i_p1] += warn_weights
    c[i_q1] += warn_weights

    rows, rhs = [], []
    for t in attackable:  # silent-branch dominance of the candidate
        if t == cand:
            continue
        row = np.zeros(5 * n)
        row[i_p0[t]] = payoffs.u_ac[t]
        row[i_q0[t]] = payoffs.u_au[t]
        row[i_p0[cand]] -= payoffs.u_ac[cand]
        row[i_q0[cand]] -= payoffs.u_au[cand]
        rows.append(row)
        rhs.append(0.0)
    for t in range(n):  # a warned attacker must prefer to quit
        row = np.zeros(5 * n)
        row[i_p1[t]] = payoffs.u_ac[t]
        row[i_q1[t]] = payoffs.u_au[t]
        rows.append(row)
        rhs.append(0.0)
    row = np.zeros(5 * n)
    row[i_b] = 1.0
    rows.append(row)
    rhs.append(budget)

    eq_rows, eq_rhs = [], []
    for t in range(n):  # coverage coupling p1 + p0 = kappa * B
        row = np.zeros(5 * n)
        row[i_p1[t]] = 1.0
        row[i_p0[t]] = 1.0
        row[i_b[t]] = -kappa[t]
        eq_rows.append(row)
        eq_rhs.append(0.0)
    for t in range(n):  # per-type simplex closure
        row = np.zeros(5 * n)
        row[[i_p1[t], i_q1[t], i_p0[t], i_q0[t]]] = 1.0
        eq_rows.append(row)
        eq_rhs.append(1.0)

    return lp.LinearProgram(c, a_ub=np.array(rows), b_ub=np.array(rhs),
                            a_eq=np.array(eq_rows), b_eq=np.array(eq_rhs))


def _extract_scheme(x, n):
    p1, q1, p0, q0, split = (x[k * n:(k + 1) * n].copy() for k in range(5))
    for arr in (p1, q1, p0, q0):
        np.clip(arr, 0.0, 1.0, out=arr)
    # absorb LP rounding into the do-nothing branch
    q0 = np.clip(1.0 - p1 - q1 - p0, 0.0, 1.0)
    return SignalingScheme(p1=p1, q1=q1, p0=p0, q0=q0,
                           budget_split=np.maximum(split, 0.0))


def solve_ossp(payoffs: PayoffStructure, estimates,
               budget: float) -> EquilibriumSolution:
    """Optimal joint warn/audit commitment (the best of the candidate LPs)."""
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    n = payoffs.n_types
    weights = _warn_cost_weights(payoffs, estimates.lam)
    kappa = estimates.kappa

    attackable = [t for t in range(n) if estimates.lam[t] > 0]
    results = []
    for cand in attackable:
        program = _ossp_program(payoffs, kappa, weights, budget, cand,
                                attackable)
        out = lp.solve(program)
        if not out.is_optimal:
            continue
        results.append((out.objective_value, cand, (program, out)))
    best = _best_candidate(results)
    if best is None:
        raise NoFeasibleType("all candidate best-response LPs infeasible")
    obj, cand, (program, out) = best
    refined = _minimize_budget(program, out.objective_value,
                               np.arange(4 * n, 5 * n))
    x = refined if refined is not None else out.x
    scheme = _extract_scheme(x, n)
    att = (scheme.p0[cand] * payoffs.u_ac[cand]
           + scheme.q0[cand] * payoffs.u_au[cand])
    return EquilibriumSolution(coverage=scheme.coverage, best_type=int(cand),
                               auditor_utility=float(obj),
                               attacker_utility=float(att),
                               scheme=scheme)


def no_silent_audit_condition(payoffs: PayoffStructure, type_id: int,
                              warn_cost: float) -> bool:
    """Whether the no-silent-audit condition holds for the given type.

    True iff 0 >= (u_dc - w) / (u_du - w) >= u_ac / u_au, where w is the
    usability-cost weight of that type.
    """
    den = payoffs.u_du[type_id] - warn_cost
    if den == 0 or payoffs.u_au[type_id] == 0:
        raise DegenerateDenominator("ratio chain undefined")
    ratio = (payoffs.u_dc[type_id] - warn_cost) / den
    return bool(0 >= ratio >= payoffs.u_ac[type_id] / payoffs.u_au[type_id])
