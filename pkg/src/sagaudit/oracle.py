"""Brute-force verification of the equilibrium solvers on small instances.

grid search enumerates feasible points directly (constraints evaluated by
hand, never through the LP machinery), so it is an independent check of
the solvers, not a restatement of them.
"""

import itertools

import numpy as np

from . import equilibrium
from .arrivals import FutureEstimate, expected_inverse_count
from .records import PayoffStructure, SignalingScheme

GRID_SLACK = 1e-9


class TooManyTypes(ValueError):
    pass


def _split_fractions(n_types: int, grid_step: float):
    """All budget-fraction vectors on the grid with sum <= 1."""
    steps = int(round(1.0 / grid_step))
    axis = range(steps + 1)
    for combo in itertools.product(axis, repeat=n_types):
        if sum(combo) <= steps:
            yield np.array(combo, dtype=float) * grid_step


def _axis_with_endpoint(limit: float, grid_step: float) -> np.ndarray:
    pts = np.arange(0.0, limit + 1e-12, grid_step)
    if pts.size == 0 or limit - pts[-1] > 1e-12:
        pts = np.append(pts, limit)
    return pts


def grid_best_coverage(payoffs: PayoffStructure, kappas, budget: float,
                       grid_step: float):
    """Exhaustive audit-only search; mirrors the online-SSE problem."""
    kappas = np.asarray(kappas, dtype=float)
    n = payoffs.n_types
    if n > 3:
        raise TooManyTypes(f"{n} types is too many for the grid oracle")
    best_util, best_cov, best_type = -np.inf, None, None
    for cand in range(n):
        for frac in _split_fractions(n, grid_step):
            theta = frac * budget * kappas
            if np.any(theta > 1 + 1e-12):
                continue
            att = theta * payoffs.u_ac + (1 - theta) * payoffs.u_au
            if np.any(att > att[cand] + GRID_SLACK):
                continue
            util = (theta[cand] * payoffs.u_dc[cand]
                    + (1 - theta[cand]) * payoffs.u_du[cand])
            if util > best_util:
                best_util, best_cov, best_type = util, theta, cand
    return best_cov, best_type, best_util


def grid_best_scheme(payoffs: PayoffStructure, kappas, lam, budget: float,
                     grid_step: float, exhaustive: bool = False):
    """Exhaustive search over signaling schemes on the grid.

    The fast mode keeps warn mass only on the assumed best type (non-best
    warn probabilities are provably zero at the optimum); exhaustive=True
    enumerates warn mass for every type and exists to validate that very
    shortcut at |T| = 2.
    """
    kappas = np.asarray(kappas, dtype=float)
    lam = np.asarray(lam, dtype=float)
    n = payoffs.n_types
    if n > 3 or (exhaustive and n > 2):
        raise TooManyTypes(f"{n} types is too many for the grid oracle")
    if not 0 < grid_step <= 0.1:
        raise ValueError("grid_step must lie in (0, 0.1]")
    weights = payoffs.quit_prob * lam * payoffs.quit_loss

    best = (-np.inf, None)
    for cand in range(n):
        for frac in _split_fractions(n, grid_step):
            split = frac * budget
            theta = split * kappas
            if np.any(theta > 1 + 1e-12):
                continue
            if exhaustive:
                best = _search_all_warn(payoffs, weights, theta, split,
                                        cand, grid_step, best)
            else:
                best = _search_best_type_warn(payoffs, weights, theta, split,
                                              cand, grid_step, best)
    util, scheme = best
    return scheme, util


def _search_best_type_warn(payoffs, weights, theta, split, cand, step, best):
    n = theta.size
    silent = theta * payoffs.u_ac + (1 - theta) * payoffs.u_au
    rivals = np.delete(silent, cand)
    rhs = rivals.max() if rivals.size else -np.inf

    p1 = _axis_with_endpoint(theta[cand], step)[:, None]
    q1 = _axis_with_endpoint(1 - theta[cand], step)[None, :]
    p0 = theta[cand] - p1
    q0 = 1 - theta[cand] - q1
    lhs = p0 * payoffs.u_ac[cand] + q0 * payoffs.u_au[cand]
    feasible = ((p1 * payoffs.u_ac[cand] + q1 * payoffs.u_au[cand]
                 <= GRID_SLACK)
                & (lhs >= rhs - GRID_SLACK))
    if not feasible.any():
        return best
    util = (p0 * payoffs.u_dc[cand] + q0 * payoffs.u_du[cand]
            + (p1 + q1) * weights[cand])
    util = np.where(feasible, util, -np.inf)
    i, j = np.unravel_index(np.argmax(util), util.shape)
    if util[i, j] > best[0]:
        vp1 = np.zeros(n)
        vq1 = np.zeros(n)
        vp0 = theta.copy()
        vq0 = 1 - theta
        vp1[cand], vq1[cand] = p1[i, 0], q1[0, j]
        vp0[cand], vq0[cand] = p0[i, 0], q0[0, j]
        scheme = SignalingScheme(p1=vp1, q1=vq1, p0=vp0, q0=vq0,
                                 budget_split=split)
        best = (float(util[i, j]), scheme)
    return best


def _search_all_warn(payoffs, weights, theta, split, cand, step, best):
    """|T| = 2 exhaustive mode: warn mass enumerated for both types."""
    other = 1 - cand
    p1o_axis = _axis_with_endpoint(theta[other], step)
    q1o_axis = _axis_with_endpoint(1 - theta[other], step)
    for p1o in p1o_axis:
        for q1o in q1o_axis:
            if (p1o * payoffs.u_ac[other] + q1o * payoffs.u_au[other]
                    > GRID_SLACK):
                continue
            p0o = theta[other] - p1o
            q0o = 1 - theta[other] - q1o
            rhs = p0o * payoffs.u_ac[other] + q0o * payoffs.u_au[other]
            extra = (p1o + q1o) * weights[other]

            p1 = _axis_with_endpoint(theta[cand], step)[:, None]
            q1 = _axis_with_endpoint(1 - theta[cand], step)[None, :]
            p0 = theta[cand] - p1
            q0 = 1 - theta[cand] - q1
            lhs = p0 * payoffs.u_ac[cand] + q0 * payoffs.u_au[cand]
            feasible = ((p1 * payoffs.u_ac[cand] + q1 * payoffs.u_au[cand]
                         <= GRID_SLACK)
                        & (lhs >= rhs - GRID_SLACK))
            if not feasible.any():
                continue
            util = (p0 * payoffs.u_dc[cand] + q0 * payoffs.u_du[cand]
                    + (p1 + q1) * weights[cand] + extra)
            util = np.where(feasible, util, -np.inf)
            i, j = np.unravel_index(np.argmax(util), util.shape)
            if util[i, j] > best[0]:
                vp1 = np.zeros(2)
                vq1 = np.zeros(2)
                vp0 = theta.copy()
                vq0 = 1 - theta
                vp1[cand], vq1[cand] = p1[i, 0], q1[0, j]
                vp0[cand], vq0[cand] = p0[i, 0], q0[0, j]
                vp1[other], vq1[other] = p1o, q1o
                vp0[other], vq0[other] = p0o, q0o
                scheme = SignalingScheme(p1=vp1, q1=vq1, p0=vp0, q0=vq0,
                                         budget_split=split)
                best = (float(util[i, j]), scheme)
    return best


UTIL_TOL = 1e-6
PROB_TOL = 1e-9


def _sample_instance(rng):
    n = int(rng.integers(1, 4))
    payoffs = PayoffStructure(
        u_dc=rng.uniform(0, 700, n),
        u_du=-rng.uniform(100, 2000, n),
        u_ac=-rng.uniform(500, 6000, n),
        u_au=rng.uniform(50, 800, n),
        audit_cost=rng.uniform(0.5, 2.0, n),
        quit_prob=rng.uniform(0.05, 0.5, n),
        quit_loss=-rng.uniform(0.5, 10.0, n))
    lam = rng.uniform(0.5, 30.0, n)
    kappa = np.array([expected_inverse_count(float(l)) for l in lam])
    kappa /= payoffs.audit_cost
    est = FutureEstimate(lam=lam, kappa=kappa,
                         rollback_active=np.zeros(n, dtype=bool))
    budget = float(rng.uniform(0.0, 15.0))
    return payoffs, est, budget


def _serialize_instance(payoffs, est, budget):
    return {
        "u_dc": payoffs.u_dc.tolist(), "u_du": payoffs.u_du.tolist(),
        "u_ac": payoffs.u_ac.tolist(), "u_au": payoffs.u_au.tolist(),
        "audit_cost": payoffs.audit_cost.tolist(),
        "quit_prob": payoffs.quit_prob.tolist(),
        "quit_loss": payoffs.quit_loss.tolist(),
        "lambda": est.lam.tolist(), "budget": budget,
    }


def check_instance(payoffs, est, budget):
    """Equilibrium-property checks for one instance; returns violation list."""
    sse = equilibrium.solve_online_sse(payoffs, est, budget)
    ossp = equilibrium.solve_ossp(payoffs, est, budget)
    scheme = ossp.scheme
    best = ossp.best_type
    weights = payoffs.quit_prob * est.lam * payoffs.quit_loss
    found = []

    off = np.ones(payoffs.n_types, dtype=bool)
    off[best] = False
    if off.any() and max(scheme.p1[off].max(), scheme.q1[off].max()) > PROB_TOL:
        found.append("warn_mass_off_best_type")
    if np.abs(ossp.coverage - sse.coverage).max() > UTIL_TOL:
        found.append("coverage_mismatch")
    if ossp.auditor_utility < sse.auditor_utility - UTIL_TOL:
        found.append("signaling_hurts_auditor")
    if equilibrium.no_silent_audit_condition(payoffs, best, weights[best]) \
            and scheme.p0[best] > PROB_TOL:
        found.append("silent_audit_mass_despite_condition")
    if payoffs.u_du[best] > weights[best]:
        if abs(ossp.auditor_utility - sse.auditor_utility) > UTIL_TOL:
            found.append("utilities_differ_with_signaling_off")
        if max(scheme.p1.max(), scheme.q1.max()) > PROB_TOL:
            found.append("warn_mass_despite_signaling_off")
    if abs(ossp.attacker_utility - sse.attacker_utility) > UTIL_TOL:
        found.append("attacker_utility_mismatch")
    lhs = (scheme.p0[best] * payoffs.u_ac[best]
           + scheme.q0[best] * payoffs.u_au[best])
    for t in range(payoffs.n_types):
        if ossp.coverage[t] > PROB_TOL:
            rhs = (scheme.p0[t] * payoffs.u_ac[t]
                   + scheme.q0[t] * payoffs.u_au[t])
            if abs(lhs - rhs) > UTIL_TOL:
                found.append(f"dominance_not_tight_type_{t}")
    return found, sse, ossp


def verify_properties(instance_count: int, rng_seed: int) -> dict:
    """Sample random instances and check every equilibrium property.

    Instances where the attacker's equilibrium utility is not positive are
    resampled: a non-participating attacker is outside the game's premise,
    and the coverage/utility equalities genuinely do not pin down a unique
    solution there.
    """
    rng = np.random.Generator(np.random.Philox(rng_seed))
    violations = []
    rejected = 0
    done = 0
    while done < instance_count:
        payoffs, est, budget = _sample_instance(rng)
        probe = equilibrium.solve_online_sse(payoffs, est, budget)
        if probe.attacker_utility <= 1e-4:
            rejected += 1
            continue
        found, _sse, _ossp = check_instance(payoffs, est, budget)
        for name in found:
            violations.append({
                "instance": done, "property": name,
                "data": _serialize_instance(payoffs, est, budget)})
        done += 1
    return {"instances": instance_count, "rejected": rejected,
            "violations": violations}
