"""Render session exports to figures and delimited tables.

The timeline figure mirrors the operator console's grid: rows are locations,
columns are timesteps; each cell shows the observation (upper left), the
dominant belief status with its probability (center), the true status under
debug exports (upper right), and dispatched workers (lower right). Cells
whose step charged the location's penalty are shaded red.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_PENALTY_COLOR = "#f4b6b6"
_NA_COLOR = "#d9d9d9"
_STATUS_SHORT = {"Ok": "Ok", "Mech": "M", "Elec": "E", "Cool": "C"}
_STATUS_ORDER = ("Ok", "Mech", "Elec", "Cool")


def penalty_cells(doc: dict) -> set[tuple[int, int]]:
    """(location_index, timestep) pairs whose step charged a penalty."""
    cells = set()
    for entry in doc["steps"]:
        for i, flagged in enumerate(entry["penalties"]):
            if flagged:
                cells.add((i, entry["t"]))
    return cells


def _timeline_columns(doc: dict) -> int:
    steps = doc["steps"]
    return steps[-1]["t"] + 1 if steps else 1


def render_timeline(doc: dict, path: Path):
    n = doc["config"]["hvac"]["n_locations"]
    last_col = _timeline_columns(doc)
    steps = doc["steps"]
    red = penalty_cells(doc)

    fig, ax = plt.subplots(figsize=(max(6.0, 0.85 * last_col), 0.9 * n + 1.4))
    for (i, t) in red:
        ax.add_patch(plt.Rectangle((t - 0.5, i - 0.5), 1, 1, color=_PENALTY_COLOR, zorder=0))
    by_time = {entry["t"]: entry for entry in steps}
    for t in range(1, last_col + 1):
        acted = by_time.get(t)                # step taken at t
        arrived = by_time.get(t - 1)          # step whose observation landed at t
        for i in range(n):
            if arrived is not None:
                obs = arrived["observation"]["statuses"][i]
                ax.text(t - 0.44, i - 0.38, _STATUS_SHORT[obs], fontsize=8,
                        ha="left", va="top", color="#1f77b4")
                marg = arrived["belief_marginals"]["status"][i]
                k = int(np.argmax(marg))
                ax.text(t, i, f"{_STATUS_SHORT[_STATUS_ORDER[k]]} {marg[k]:.2f}",
                        fontsize=8, ha="center", va="center")
            elif t == 1:
                ax.text(t, i, "Ok 1.00", fontsize=8, ha="center", va="center")
            if acted is not None:
                true_here = acted.get("true_state")
                if true_here is not None:
                    ax.text(t + 0.44, i - 0.38, _STATUS_SHORT[true_here["statuses"][i]],
                            fontsize=8, ha="right", va="top", color="#2ca02c")
                workers = [str(r + 1) for r, loc in enumerate(acted["action"]) if loc == i + 1]
                if workers:
                    ax.text(t + 0.44, i + 0.40, "w" + ",".join(workers), fontsize=8,
                            ha="right", va="bottom", color="#d62728")
    ax.set_xlim(0.5, last_col + 0.5)
    ax.set_ylim(n - 0.5, -0.5)
    ax.set_xticks(range(1, last_col + 1))
    ax.set_yticks(range(n))
    ax.set_yticklabels([f"Location {i + 1}" for i in range(n)])
    ax.set_xlabel("timestep")
    ax.set_title("Episode timeline (obs upper-left, belief center, "
                 "true upper-right, dispatch lower-right; penalties red)")
    ax.grid(True, which="both", color="#cccccc", linewidth=0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_weighting_chart(phi_a: list[float], phi_hat: list[float],
                           labels: list[str], path: Path, title: str):
    x = np.arange(len(phi_a))
    width = 0.38
    fig, ax = plt.subplots(figsize=(1.6 * len(phi_a) + 2, 3.6))
    ax.bar(x - width / 2, phi_a, width, label="algorithm", color="#1f77b4")
    ax.bar(x + width / 2, phi_hat, width, label="implied (user)", color="#ff7f0e")
    for xi, (a, h) in enumerate(zip(phi_a, phi_hat)):
        pct = f"{h / a * 100:.0f}%" if a > 0 else "n/a"
        ax.text(xi + width / 2, h, pct, ha="center", va="bottom", fontsize=8)
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("weight")
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def write_trajectory_table(doc: dict, path: Path, delimiter: str = ","):
    n = doc["config"]["hvac"]["n_locations"]
    r = doc["config"]["hvac"]["n_workers"]
    header = (["t"]
              + [f"worker_{k + 1}" for k in range(r)]
              + [f"obs_loc_{i + 1}" for i in range(n)]
              + [f"penalty_loc_{i + 1}" for i in range(n)]
              + [f"feature_{k + 1}" for k in range(n + r)]
              + ["reward", "running_return"])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(header)
        for entry in doc["steps"]:
            row = ([entry["t"]]
                   + list(entry["action"])
                   + list(entry["observation"]["statuses"])
                   + [int(b) for b in entry["penalties"]]
                   + list(entry["features"])
                   + [entry["reward"], entry["running_return"]])
            writer.writerow(row)


def write_reconciliation_table(doc: dict, path: Path, delimiter: str = ","):
    f_count = len(doc["config"]["phi_a"])
    header = (["t", "a_a", "a_h", "U", "feasible", "l1_distance", "residual"]
              + [f"phi_hat_{k + 1}" for k in range(f_count)]
              + ["explanation"])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        writer.writerow(header)
        for entry in doc["reconciliations"]:
            sentences = " | ".join(s["text"] for s in entry["explanation"])
            row = ([entry["t"],
                    ",".join(str(a) for a in entry["a_a"]),
                    ",".join(str(a) for a in entry["a_h"]),
                    entry["U"], int(entry["feasible"]),
                    entry["l1_distance"], entry["residual"]]
                   + list(entry["phi_hat"]) + [sentences])
            writer.writerow(row)


def render_report(doc: dict, out_dir, delimiter: str = ",") -> list[Path]:
    """Write all report artifacts for a session export; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ext = "tsv" if delimiter == "\t" else "csv"
    paths = []

    table = out / f"trajectory.{ext}"
    write_trajectory_table(doc, table, delimiter)
    paths.append(table)

    timeline = out / "timeline.png"
    render_timeline(doc, timeline)
    paths.append(timeline)

    if doc["reconciliations"]:
        rec_table = out / f"reconciliations.{ext}"
        write_reconciliation_table(doc, rec_table, delimiter)
        paths.append(rec_table)
        n = doc["config"]["hvac"]["n_locations"]
        r = doc["config"]["hvac"]["n_workers"]
        labels = ([f"penalty L{i + 1}" for i in range(n)]
                  + [f"wage W{k + 1}" for k in range(r)])
        for idx, entry in enumerate(doc["reconciliations"]):
            chart = out / f"weighting_t{entry['t']}_{idx}.png"
            render_weighting_chart(
                doc["config"]["phi_a"], entry["phi_hat"], labels, chart,
                title=f"t={entry['t']}: proposed {entry['a_h']} vs planned {entry['a_a']}")
            paths.append(chart)
    return paths
