"""Batch plotting for tspvqa result files.

Consumes the runner's documented outputs (summary.csv, run_*.json records,
landscape CSVs) and renders three figure kinds: ratio-vs-n curves with
mean/std bands, optimization traces with a moving minimum, and
energy-landscape heatmaps.
"""

from tspfigures.plots import (
    FigureSpec,
    ParseError,
    plot_landscape,
    plot_ratios,
    plot_traces,
    render,
)

__all__ = [
    "FigureSpec",
    "ParseError",
    "plot_landscape",
    "plot_ratios",
    "plot_traces",
    "render",
]
