"""The three figure kinds, each a pure function from a result file to a
matplotlib Figure.

All parsing is strict: a missing column, an empty trace, or a non-rectangular
landscape grid raises ParseError naming the problem instead of producing a
misleading plot.
"""

from __future__ import annotations

import csv
import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class ParseError(ValueError):
    """An input file does not match the runner's documented schema."""


SUMMARY_COLUMNS = [
    "n", "scheme", "algorithm",
    "r_f_mean", "r_f_std", "r_ell_mean", "r_ell_std",
    "restarts", "failures",
]

KINDS = ("ratios", "traces", "landscape")


@dataclass(frozen=True)
class FigureSpec:
    kind: str  # "ratios" | "traces" | "landscape"
    input_path: str
    output_path: str
    axis_labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParseError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


# ---------------------------------------------------------------------------
# ratios


def read_summary(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in SUMMARY_COLUMNS if c not in header]
        if missing:
            raise ParseError(f"summary CSV is missing column(s): {', '.join(missing)}")
        rows = []
        for raw in reader:
            try:
                rows.append({
                    "n": int(raw["n"]),
                    "scheme": raw["scheme"],
                    "algorithm": raw["algorithm"],
                    "r_f_mean": float(raw["r_f_mean"]),
                    "r_f_std": float(raw["r_f_std"]),
                    "r_ell_mean": float(raw["r_ell_mean"]),
                    "r_ell_std": float(raw["r_ell_std"]),
                })
            except ValueError as exc:
                raise ParseError(f"bad summary row {raw!r}: {exc}") from exc
    if not rows:
        raise ParseError(f"summary CSV {path} has no data rows")
    return rows


def plot_ratios(summary_path, axis_labels: dict | None = None) -> plt.Figure:
    """Length-ratio and feasibility-ratio curves over n, one per method.

    Each (scheme, algorithm) pair becomes one curve with a shaded +/- std
    band; a method with a single n renders as a lone marker without a band.
    """
    rows = read_summary(summary_path)
    groups: dict[tuple[str, str], list[dict]] = defaultdict(list)
    for row in rows:
        groups[(row["scheme"], row["algorithm"])].append(row)

    fig, (ax_ell, ax_f) = plt.subplots(1, 2, figsize=(9, 3.6), sharex=True)
    for (scheme, algorithm), points in sorted(groups.items()):
        points.sort(key=lambda r: r["n"])
        ns = np.array([p["n"] for p in points])
        label = f"{scheme} {algorithm.upper()}"
        for ax, mean_key, std_key in ((ax_ell, "r_ell_mean", "r_ell_std"),
                                      (ax_f, "r_f_mean", "r_f_std")):
            mean = np.array([p[mean_key] for p in points])
            std = np.array([p[std_key] for p in points])
            line, = ax.plot(ns, mean, marker="o", label=label)
            if len(points) > 1:
                ax.fill_between(ns, mean - std, mean + std,
                                color=line.get_color(), alpha=0.2, linewidth=0)

    labels = axis_labels or {}
    ax_ell.set_xlabel(labels.get("x", "number of nodes n"))
    ax_f.set_xlabel(labels.get("x", "number of nodes n"))
    ax_ell.set_ylabel(labels.get("y_left", "rescaled length ratio"))
    ax_f.set_ylabel(labels.get("y_right", "feasibility ratio"))
    ax_ell.set_title("(a)")
    ax_f.set_title("(b)")
    ax_f.legend(fontsize=8)
    ax_ell.xaxis.set_major_locator(matplotlib.ticker.MaxNLocator(integer=True))
    fig.tight_layout()
    return fig


# ---------------------------------------------------------------------------
# traces


def read_record(path) -> dict:
    with open(path) as fh:
        try:
            record = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"run record {path} is not valid JSON: {exc}") from exc
    for key in ("restarts", "energy_bounds"):
        if key not in record:
            raise ParseError(f"run record is missing key {key!r}")
    if not record["restarts"]:
        raise ParseError("run record has no restarts")
    return record


def plot_traces(record_path, restart: int | None = None,
                axis_labels: dict | None = None) -> plt.Figure:
    """Two panels: every evaluated energy, and the moving minimum.

    Energies are rescaled with the record's energy bounds so the ground state
    sits at 0 and the worst state at 1. With `restart=None` all restarts are
    overlaid; otherwise only the requested one is drawn.
    """
    record = read_record(record_path)
    e_min, e_max = record["energy_bounds"]
    if not e_min < e_max:
        raise ParseError(f"degenerate energy bounds [{e_min}, {e_max}]")
    restarts = record["restarts"]
    if restart is not None:
        restarts = [r for r in restarts if r["restart"] == restart]
        if not restarts:
            raise ParseError(f"run record has no restart {restart}")

    fig, (ax_raw, ax_min) = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
    for entry in restarts:
        trace = np.asarray(entry["trace_energies"], dtype=float)
        if trace.size == 0:
            raise ParseError(f"restart {entry['restart']} has an empty trace")
        rescaled = (trace - e_min) / (e_max - e_min)
        steps = np.arange(1, trace.size + 1)
        ax_raw.plot(steps, rescaled, linewidth=0.7, alpha=0.7)
        ax_min.plot(steps, np.minimum.accumulate(rescaled), linewidth=0.9)

    labels = axis_labels or {}
    for ax in (ax_raw, ax_min):
        ax.set_xlabel(labels.get("x", "evaluation"))
    ax_raw.set_ylabel(labels.get("y", "rescaled energy"))
    ax_raw.set_title("(a) evaluated energies")
    ax_min.set_title("(b) moving minimum")
    fig.tight_layout()
    return fig


# ---------------------------------------------------------------------------
# landscape


def read_landscape(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse a landscape CSV back into (grid, matrix).

    The file holds one row per (theta_k1, theta_k2) pair; the grid must be
    the full rectangular product of one set of values per axis.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["theta_k1", "theta_k2", "energy"]:
            raise ParseError(f"unexpected landscape header {header!r}")
        try:
            rows = [(float(a), float(b), float(e)) for a, b, e in reader]
        except ValueError as exc:
            raise ParseError(f"bad landscape row: {exc}") from exc
    if not rows:
        raise ParseError(f"landscape CSV {path} has no data rows")
    grid1 = sorted({a for a, _, _ in rows})
    grid2 = sorted({b for _, b, _ in rows})
    if grid1 != grid2 or len(rows) != len(grid1) * len(grid2):
        raise ParseError("landscape grid is not a square rectangular product")
    index = {theta: k for k, theta in enumerate(grid1)}
    matrix = np.full((len(grid1), len(grid1)), np.nan)
    for a, b, e in rows:
        matrix[index[a], index[b]] = e
    if np.isnan(matrix).any():
        raise ParseError("landscape grid has duplicate or missing cells")
    return np.asarray(grid1), matrix


def plot_landscape(landscape_path, axis_labels: dict | None = None) -> plt.Figure:
    """Heatmap of one two-parameter energy scan over [0, 2*pi)^2."""
    grid, matrix = read_landscape(landscape_path)
    fig, ax = plt.subplots(figsize=(4.6, 4.0))
    # each sample covers [theta, theta + step); the image spans [0, 2*pi]
    image = ax.imshow(matrix.T, origin="lower",
                      extent=(0.0, 2.0 * math.pi, 0.0, 2.0 * math.pi),
                      aspect="equal", cmap="viridis")
    labels = axis_labels or {}
    ax.set_xlabel(labels.get("x", r"$\theta_{k_1}$"))
    ax.set_ylabel(labels.get("y", r"$\theta_{k_2}$"))
    ticks = [0, math.pi, 2 * math.pi]
    ax.set_xticks(ticks, ["0", r"$\pi$", r"$2\pi$"])
    ax.set_yticks(ticks, ["0", r"$\pi$", r"$2\pi$"])
    fig.colorbar(image, ax=ax, label=labels.get("z", "energy"))
    fig.tight_layout()
    return fig


# ---------------------------------------------------------------------------


def render(spec: FigureSpec) -> Path:
    """Build the figure described by `spec` and write it to disk."""
    plotters = {
        "ratios": plot_ratios,
        "traces": plot_traces,
        "landscape": plot_landscape,
    }
    fig = plotters[spec.kind](spec.input_path, axis_labels=spec.axis_labels)
    out = Path(spec.output_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out
