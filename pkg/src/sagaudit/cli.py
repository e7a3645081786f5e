"""Command-line entry point.

Exit codes: 0 success, 2 config error, 3 data error, 4 internal solver
error (including property violations from `verify` and a failed `bench`
latency assertion).
"""

import argparse
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from . import arrivals, datagen, engine, equilibrium, oracle, report
from .config import ConfigError, load_config, with_overrides
from .lp import LpError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_SOLVER = 4


def _add_common(parser):
    parser.add_argument("--config", help="YAML config file (defaults built in)")
    parser.add_argument("--seed", type=int, help="top-level seed override")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sagaudit",
        description="Signaling audit game solver and replay simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit synthetic alert-log cycles")
    _add_common(p)
    p.add_argument("--cycles", type=int, default=None,
                   help="number of cycles (default: history + test count)")
    p.add_argument("--out", required=True, help="alert-log CSV path")

    p = sub.add_parser("fit", help="fit an arrival profile from alert logs")
    _add_common(p)
    p.add_argument("--history", required=True, help="alert-log CSV")
    p.add_argument("--out", required=True, help="profile JSON path")

    p = sub.add_parser("simulate", help="replay test cycles and report")
    _add_common(p)
    p.add_argument("--history", help="historical alert-log CSV "
                   "(default: synthesized from the config)")
    p.add_argument("--test", help="test alert-log CSV "
                   "(default: synthesized from the config)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--budget", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--quit-loss", type=float)
    p.add_argument("--quit-prob-scale", type=float)
    p.add_argument("--no-figures", action="store_true",
                   help="skip per-cycle PNG rendering")

    p = sub.add_parser("solve", help="one-shot OSSP/SSE at a given state")
    _add_common(p)
    p.add_argument("--budget", type=float)
    p.add_argument("--time-s", type=float, default=0.0,
                   help="in-cycle time point for the arrival estimate")

    p = sub.add_parser("verify", help="run the brute-force property checks")
    _add_common(p)
    p.add_argument("--instances", type=int, default=1000)
    p.add_argument("--out", help="violation-report JSON path")

    p = sub.add_parser("bench", help="per-alert solve latency check")
    _add_common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--limit-ms", type=float, default=100.0)
    return parser


def _synth_cycles(cfg, n_cycles, seed_tag):
    cycles = datagen.generate_cycles(cfg.arrival, n_cycles,
                                     seed=(cfg.seed * 1000 + seed_tag))
    return {i: c for i, c in enumerate(cycles)}


def _profile_from(cfg, history):
    return arrivals.fit(history.values(), cfg.payoffs.n_types,
                        bucket_width=cfg.bucket_width)


def cmd_generate(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = with_overrides(cfg, seed=args.seed)
    n = args.cycles if args.cycles is not None \
        else cfg.history_cycles + cfg.test_cycles
    cycles = _synth_cycles(cfg, n, seed_tag=0)
    report.write_alert_log(args.out, cycles)
    print(f"wrote {sum(len(c) for c in cycles.values())} alerts over "
          f"{n} cycles to {args.out}")
    return EXIT_OK


def cmd_fit(args):
    cfg = load_config(args.config)
    history = report.read_alert_log(args.history, cfg.payoffs.n_types)
    profile = _profile_from(cfg, history)
    with open(args.out, "w") as fh:
        json.dump({"bucket_width": profile.bucket_width,
                   "remaining_mean": profile.remaining_mean.tolist()}, fh)
        fh.write("\n")
    print(f"fitted {profile.n_types} types x {profile.n_buckets} buckets "
          f"from {len(history)} cycles")
    return EXIT_OK


def cmd_simulate(args):
    cfg = load_config(args.config)
    cfg = with_overrides(cfg, budget=args.budget, alpha=args.alpha,
                         quit_loss=args.quit_loss,
                         quit_prob_scale=args.quit_prob_scale,
                         seed=args.seed)
    if args.history:
        history = report.read_alert_log(args.history, cfg.payoffs.n_types)
    else:
        history = _synth_cycles(cfg, cfg.history_cycles, seed_tag=0)
    if args.test:
        tests = report.read_alert_log(args.test, cfg.payoffs.n_types)
    else:
        tests = _synth_cycles(cfg, cfg.test_cycles, seed_tag=1)
    profile = _profile_from(cfg, history)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    reports = []
    for cid in sorted(tests):
        reports.append(engine.run_cycle(
            tests[cid], cfg.payoffs, profile, cfg.budget, cfg.alpha,
            cfg.seed, cycle_id=cid,
            rollback_threshold=cfg.rollback_threshold,
            interpolation=cfg.interpolation))
    runtime = time.perf_counter() - t0

    settings = {"budget": cfg.budget, "alpha": cfg.alpha, "seed": cfg.seed,
                "quit_loss": cfg.payoffs.quit_loss.tolist(),
                "quit_prob": cfg.payoffs.quit_prob.tolist()}
    summary = report.summarize(reports, settings, runtime)
    report.write_trace(outdir / "trace.csv", reports)
    report.write_summary(outdir / "summary.json", summary)
    if not args.no_figures:
        for rep in reports:
            report.render_cycle_figure(rep, outdir / f"cycle_{rep.cycle_id:03d}.png")
    adv = summary["advantage"]
    print(f"{summary['n_alerts']} alerts over {len(reports)} cycles; "
          f"mean OSSP advantage {adv['mean']:.2f} "
          f"(std {adv['std']:.2f}, {adv['pct_improvement']:.1f}%)")
    return EXIT_OK


def cmd_solve(args):
    cfg = load_config(args.config)
    cfg = with_overrides(cfg, budget=args.budget, seed=args.seed)
    history = _synth_cycles(cfg, cfg.history_cycles, seed_tag=0)
    profile = _profile_from(cfg, history)
    est = arrivals.estimate(profile, args.time_s, cfg.payoffs.audit_cost,
                            rollback_threshold=cfg.rollback_threshold,
                            interpolation=cfg.interpolation)
    ossp = equilibrium.solve_ossp(cfg.payoffs, est, cfg.budget)
    sse = equilibrium.solve_online_sse(cfg.payoffs, est, cfg.budget)
    scheme = ossp.scheme
    print(f"budget {cfg.budget} at t={args.time_s:.0f}s; "
          f"best type {ossp.best_type}")
    print(f"auditor utility: OSSP {ossp.auditor_utility:.4f}, "
          f"online SSE {sse.auditor_utility:.4f}")
    print(f"attacker utility: {ossp.attacker_utility:.4f}")
    print("type  p1       q1       p0       q0       coverage  budget")
    for t in range(cfg.payoffs.n_types):
        print(f"{t:4d}  {scheme.p1[t]:.5f}  {scheme.q1[t]:.5f}  "
              f"{scheme.p0[t]:.5f}  {scheme.q0[t]:.5f}  "
              f"{scheme.coverage[t]:.5f}   {scheme.budget_split[t]:.4f}")
    return EXIT_OK


def cmd_verify(args):
    seed = args.seed if args.seed is not None else 20240817
    result = oracle.verify_properties(args.instances, rng_seed=seed)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2)
            fh.write("\n")
    n_viol = len(result["violations"])
    print(f"{result['instances']} instances checked "
          f"({result['rejected']} rejected as non-participating); "
          f"{n_viol} violations")
    if n_viol:
        for v in result["violations"][:10]:
            print(f"  instance {v['instance']}: {v['property']}")
        return EXIT_SOLVER
    return EXIT_OK


def cmd_bench(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = with_overrides(cfg, seed=args.seed)
    history = _synth_cycles(cfg, cfg.history_cycles, seed_tag=0)
    profile = _profile_from(cfg, history)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    times = []
    for _ in range(args.samples):
        now = float(rng.uniform(0, 86400))
        budget = float(rng.uniform(1.0, cfg.budget))
        est = arrivals.estimate(profile, now, cfg.payoffs.audit_cost,
                                rollback_threshold=cfg.rollback_threshold)
        t0 = time.perf_counter()
        equilibrium.solve_ossp(cfg.payoffs, est, budget)
        times.append(1000.0 * (time.perf_counter() - t0))
    med = statistics.median(times)
    print(f"solve_ossp over {args.samples} states (|T| = "
          f"{cfg.payoffs.n_types}): median {med:.2f} ms, "
          f"max {max(times):.2f} ms")
    if med > args.limit_ms:
        print(f"FAIL: median above {args.limit_ms} ms")
        return EXIT_SOLVER
    return EXIT_OK


_COMMANDS = {
    "generate": cmd_generate,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (report.DataError, arrivals.EmptyHistory, engine.OutOfOrderAlert,
            datagen.InvalidSpec) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (LpError, equilibrium.NoFeasibleType) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
