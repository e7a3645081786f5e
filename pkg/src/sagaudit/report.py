"""File I/O and report rendering: alert-log CSV, trace CSV, summary JSON,
and per-cycle utility figures."""

import csv
import json

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .records import AlertEvent

ALERT_LOG_HEADER = ["cycle_id", "timestamp_s", "type_id"]
TRACE_HEADER = ["cycle_id", "alert_idx", "timestamp_s", "type_id", "best_type",
                "signal", "ossp_utility", "online_sse_utility",
                "offline_sse_utility", "remaining_budget"]


class DataError(ValueError):
    pass


def write_alert_log(path, cycles):
    """cycles: mapping cycle_id -> sequence of AlertEvent."""
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ALERT_LOG_HEADER)
        for cid in sorted(cycles):
            for ev in cycles[cid]:
                writer.writerow([cid, int(ev.timestamp), ev.type_id])


def read_alert_log(path, n_types=None):
    """Parse an alert-log CSV back into {cycle_id: [AlertEvent, ...]}."""
    cycles = {}
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != ALERT_LOG_HEADER:
                raise DataError(f"{path}: bad header {header}")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    cid, ts, tid = int(row[0]), int(row[1]), int(row[2])
                    ev = AlertEvent(timestamp=float(ts), type_id=tid)
                except (IndexError, ValueError) as exc:
                    raise DataError(f"{path}:{lineno}: {exc}") from exc
                if n_types is not None and tid >= n_types:
                    raise DataError(f"{path}:{lineno}: type_id {tid} out of "
                                    f"range (|T| = {n_types})")
                cycles.setdefault(cid, []).append(ev)
    except OSError as exc:
        raise DataError(str(exc)) from exc
    for cid, events in cycles.items():
        last = -1.0
        for ev in events:
            if ev.timestamp < last:
                raise DataError(f"{path}: cycle {cid} timestamps out of order")
            last = ev.timestamp
    return cycles


def write_trace(path, reports):
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for rep in reports:
            for r in rep.records:
                writer.writerow([
                    rep.cycle_id, r.alert_idx, int(r.timestamp), r.type_id,
                    r.best_type, r.signal,
                    f"{r.ossp_utility:.6f}", f"{r.online_sse_utility:.6f}",
                    f"{rep.offline_sse_utility:.6f}",
                    f"{r.remaining_budget:.6f}"])


def summarize(reports, settings, runtime_s):
    """Aggregate per-cycle reports into the summary structure."""
    diffs = np.concatenate([
        [r.ossp_utility - r.online_sse_utility for r in rep.records]
        for rep in reports]) if reports else np.zeros(0)
    sse_vals = np.concatenate([
        [r.online_sse_utility for r in rep.records] for rep in reports]) \
        if reports else np.zeros(0)
    ossp_vals = np.concatenate([
        [r.ossp_utility for r in rep.records] for rep in reports]) \
        if reports else np.zeros(0)
    mean_sse = float(sse_vals.mean()) if sse_vals.size else 0.0
    mean_diff = float(diffs.mean()) if diffs.size else 0.0
    return {
        "settings": settings,
        "n_cycles": len(reports),
        "n_alerts": int(diffs.size),
        "advantage": {
            "mean": mean_diff,
            "std": float(diffs.std()) if diffs.size else 0.0,
            "pct_improvement": (100.0 * mean_diff / abs(mean_sse)
                                if mean_sse != 0 else 0.0),
        },
        "mean_ossp_utility": float(ossp_vals.mean()) if ossp_vals.size else 0.0,
        "mean_online_sse_utility": mean_sse,
        "per_cycle": [
            {"cycle_id": rep.cycle_id,
             "n_alerts": len(rep.records),
             "mean_advantage": rep.mean_advantage,
             "std_advantage": rep.std_advantage,
             "offline_sse_utility": rep.offline_sse_utility}
            for rep in reports],
        "runtime": {
            "total_s": runtime_s,
            "per_alert_ms": (1000.0 * runtime_s / diffs.size
                             if diffs.size else 0.0),
        },
    }


def write_summary(path, summary):
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")


def render_cycle_figure(rep, path):
    """Per-alert auditor utility for the three strategies, one cycle."""
    idx = np.arange(len(rep.records))
    ossp = [r.ossp_utility for r in rep.records]
    sse = [r.online_sse_utility for r in rep.records]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(idx, ossp, label="OSSP", lw=1.2)
    ax.plot(idx, sse, label="online SSE", lw=1.2)
    ax.axhline(rep.offline_sse_utility, color="gray", ls="--", lw=1.0,
               label="offline SSE")
    ax.set_xlabel("alert index")
    ax.set_ylabel("auditor expected utility")
    ax.set_title(f"cycle {rep.cycle_id}")
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
