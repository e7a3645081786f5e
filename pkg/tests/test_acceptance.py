"""Acceptance gate: one test (and one printed pass line) per criterion.

The simulation-based criteria share a cached sweep over budget / usability
cost / reserve fraction settings, so the whole module stays within its
runtime budget.
"""

import statistics
import time

import numpy as np
import pytest

from sagaudit import arrivals, datagen, engine, equilibrium, lp, oracle
from sagaudit.config import default_config, with_overrides
from bfs_enum import best_bfs_objective, random_bounded_lp

UTIL_TOL = 1e-6
PROB_TOL = 1e-9

_BASE = default_config()
_HISTORY = datagen.generate_cycles(_BASE.arrival, _BASE.history_cycles,
                                   seed=_BASE.seed * 1000)
_TEST_CYCLES = datagen.generate_cycles(_BASE.arrival, _BASE.test_cycles,
                                       seed=_BASE.seed * 1000 + 1)
_PROFILE = arrivals.fit(_HISTORY, _BASE.payoffs.n_types)

_sim_cache = {}
_sim_seconds = {}


def _simulate(budget=50.0, quit_loss=-1.0, alpha=0.01, quit_prob_scale=None):
    key = (budget, quit_loss, alpha, quit_prob_scale)
    if key not in _sim_cache:
        cfg = with_overrides(_BASE, budget=budget, alpha=alpha,
                             quit_loss=quit_loss,
                             quit_prob_scale=quit_prob_scale)
        t0 = time.perf_counter()
        reports = [engine.run_cycle(stream, cfg.payoffs, _PROFILE, cfg.budget,
                                    cfg.alpha, cfg.seed, cycle_id=i)
                   for i, stream in enumerate(_TEST_CYCLES)]
        _sim_seconds[key] = time.perf_counter() - t0
        diffs = np.concatenate(
            [[r.ossp_utility - r.online_sse_utility for r in rep.records]
             for rep in reports])
        ossp = np.concatenate(
            [[r.ossp_utility for r in rep.records] for rep in reports])
        _sim_cache[key] = {"reports": reports,
                           "advantage": float(diffs.mean()),
                           "mean_ossp": float(ossp.mean())}
    return _sim_cache[key]


def _suite_instances(n, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    done = 0
    while done < n:
        payoffs, est, budget = oracle._sample_instance(rng)
        probe = equilibrium.solve_online_sse(payoffs, est, budget)
        if probe.attacker_utility <= 1e-4:
            continue
        yield payoffs, est, budget
        done += 1


def test_criterion_1_property_suite_clean():
    t0 = time.perf_counter()
    result = oracle.verify_properties(1000, rng_seed=20240817)
    elapsed = time.perf_counter() - t0
    assert result["violations"] == []
    assert elapsed < 60.0
    print(f"PASS criterion 1: 1000 instances, 0 violations, {elapsed:.1f}s")


def test_criterion_2_oracle_equivalence():
    from sagaudit.records import PayoffStructure
    fixture = PayoffStructure(u_dc=[2.0, 1.0], u_du=[-8.0, -5.0],
                              u_ac=[-10.0, -6.0], u_au=[5.0, 4.0],
                              audit_cost=[1.0, 1.0], quit_prob=[0.186, 0.186],
                              quit_loss=[-1.0, -1.0])
    kappa = np.array([0.5, 0.5])
    lam = np.array([3.0, 3.0])
    est = arrivals.FutureEstimate(lam=lam, kappa=kappa,
                                  rollback_active=np.zeros(2, dtype=bool))
    step = 0.01
    t0 = time.perf_counter()
    worst = 0.0
    for budget in (0.5, 1.0, 2.0):
        # objective changes at most L per unit move in each of the grid's
        # dimensions (2 budget fractions, 2 warn probabilities)
        lip = max(float(np.max(np.abs(fixture.u_ac))),
                  float(np.max(np.abs(fixture.u_au))),
                  float(np.max(np.abs(fixture.u_dc - fixture.u_du)))
                  * budget * float(kappa.max()),
                  float(np.max(np.abs(fixture.quit_prob * lam
                                      * fixture.quit_loss))))
        tol = lip * step * 4
        sse = equilibrium.solve_online_sse(fixture, est, budget)
        _c, _b, grid_sse = oracle.grid_best_coverage(fixture, kappa, budget,
                                                     step)
        assert abs(sse.auditor_utility - grid_sse) <= tol
        ossp = equilibrium.solve_ossp(fixture, est, budget)
        _s, grid_ossp = oracle.grid_best_scheme(fixture, kappa, lam, budget,
                                                step)
        assert ossp.auditor_utility >= grid_ossp - 1e-9
        assert abs(ossp.auditor_utility - grid_ossp) <= tol
        worst = max(worst, abs(sse.auditor_utility - grid_sse),
                    abs(ossp.auditor_utility - grid_ossp))
    elapsed = time.perf_counter() - t0
    assert elapsed < 300.0
    print(f"PASS criterion 2: LP vs grid worst gap {worst:.4f}, "
          f"{elapsed:.1f}s")


def test_criterion_3_coverage_equality():
    worst = 0.0
    for payoffs, est, budget in _suite_instances(1000, seed=20240817):
        ossp = equilibrium.solve_ossp(payoffs, est, budget)
        sse = equilibrium.solve_online_sse(payoffs, est, budget)
        worst = max(worst, float(np.max(np.abs(ossp.coverage - sse.coverage))))
    assert worst <= UTIL_TOL
    print(f"PASS criterion 3: max per-type coverage gap {worst:.2e}")


def test_criterion_4_advantage_trends():
    adv = {b: _simulate(budget=b)["advantage"] for b in (30.0, 50.0, 70.0)}
    assert adv[30.0] > 0 and adv[50.0] > 0 and adv[70.0] > 0
    assert adv[30.0] < adv[50.0] < adv[70.0]

    by_cost = {c: _simulate(quit_loss=c)["advantage"]
               for c in (-1.0, -5.0, -10.0)}
    assert by_cost[-1.0] >= by_cost[-5.0] >= by_cost[-10.0]

    by_alpha = {a: _simulate(alpha=a)["advantage"] for a in (0.01, 0.05)}
    assert by_alpha[0.01] >= by_alpha[0.05]

    elapsed = sum(_sim_seconds.values())
    assert elapsed < 600.0
    print(f"PASS criterion 4: advantage {adv[30.0]:.1f} < {adv[50.0]:.1f} "
          f"< {adv[70.0]:.1f}; cost sweep {by_cost[-1.0]:.1f} >= "
          f"{by_cost[-5.0]:.1f} >= {by_cost[-10.0]:.1f}; alpha sweep "
          f"{by_alpha[0.01]:.1f} >= {by_alpha[0.05]:.1f}; {elapsed:.0f}s")


def test_criterion_5_quit_prob_sweep():
    lines = []
    for cost in (-1.0, -5.0):
        utils = [
            _simulate(quit_loss=cost, quit_prob_scale=s)["mean_ossp"]
            for s in (1.0, 0.5, 0.1)]
        assert utils[0] < utils[1] < utils[2]
        lines.append(f"C={cost}: {utils[0]:.1f} < {utils[1]:.1f} "
                     f"< {utils[2]:.1f}")
    print(f"PASS criterion 5: {'; '.join(lines)}")


def test_criterion_6_solve_latency():
    rng = np.random.Generator(np.random.Philox(_BASE.seed))
    times = []
    for _ in range(50):
        now = float(rng.uniform(0, 86400))
        budget = float(rng.uniform(1.0, 50.0))
        est = arrivals.estimate(_PROFILE, now, _BASE.payoffs.audit_cost)
        t0 = time.perf_counter()
        equilibrium.solve_ossp(_BASE.payoffs, est, budget)
        times.append(1000.0 * (time.perf_counter() - t0))
    med = statistics.median(times)
    assert med <= 100.0
    print(f"PASS criterion 6: median solve {med:.1f} ms at |T| = 7")


def test_criterion_7_budget_integrity():
    _simulate(budget=50.0)  # ensure at least one replay when run standalone
    checked = 0
    for key, entry in _sim_cache.items():
        budget, _cost, alpha, _scale = key
        for rep in entry["reports"]:
            last = budget * (1.0 - alpha)
            total = 0.0
            for r in rep.records:
                assert r.remaining_budget <= last + 1e-12
                assert r.remaining_budget >= 0.0
                total += r.deduction
                last = r.remaining_budget
                checked += 1
            assert total <= budget * (1.0 - alpha) + UTIL_TOL
    assert checked > 0
    print(f"PASS criterion 7: budget monotone/non-negative over "
          f"{checked} alerts")


def test_criterion_8_lp_vs_enumeration():
    rng = np.random.Generator(np.random.Philox(20240818))
    worst = 0.0
    for _ in range(500):
        prog = random_bounded_lp(rng, max_vars=8)
        out = lp.solve(prog)
        assert out.is_optimal
        gap = abs(out.objective_value - best_bfs_objective(prog))
        worst = max(worst, gap)
    assert worst <= UTIL_TOL
    print(f"PASS criterion 8: 500 LPs, worst objective gap {worst:.2e}")
