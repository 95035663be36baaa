"""Figure rendering for sweep and comparison reports.

Uses the object-oriented matplotlib API with the Agg canvas so nothing
touches pyplot's global state or needs a display.
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Optional, Sequence, Union

import matplotlib
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .scenario import ComparisonReport, RssTrace, normalize_trace

PathLike = Union[str, os.PathLike]

STYLE = {
    "font.size": 10,
    "axes.linewidth": 0.8,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.5,
    "legend.fontsize": 8,
    "legend.frameon": False,
}

# Tableau 10, matches the matplotlib default cycle but pinned here.
COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _new_figure(width: float = 6.0, height: Optional[float] = None) -> Figure:
    if height is None:
        height = width * (math.sqrt(5) - 1.0) / 2.0
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def _finite(trace: RssTrace) -> tuple[list[float], list[float]]:
    xs, ys = [], []
    for d, v in trace.samples:
        # NaN breaks the line at below-floor samples.
        xs.append(d)
        ys.append(v if math.isfinite(v) else math.nan)
    return xs, ys


def _save(fig: Figure, path: PathLike) -> None:
    ext = os.path.splitext(os.fspath(path))[1].lower()
    # Drop timestamps/version strings so repeated runs produce identical files.
    metadata = {"Software": None} if ext == ".png" else {}
    if ext == ".svg":
        metadata = {"Date": None, "Creator": None}
    elif ext == ".pdf":
        metadata = {"CreationDate": None, "Producer": None, "Creator": None}
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=metadata)


def plot_sweep(
    traces: Sequence[RssTrace],
    path: PathLike,
    normalized: bool = False,
    title: Optional[str] = None,
) -> None:
    """RSS versus horizontal distance, one line per trace."""
    with matplotlib.rc_context(STYLE):
        fig = _new_figure()
        ax = fig.add_subplot(1, 1, 1)
        for i, trace in enumerate(traces):
            shown = normalize_trace(trace) if normalized and not trace.normalized else trace
            xs, ys = _finite(shown)
            ax.plot(xs, ys, color=COLORS[i % len(COLORS)], label=trace.label)
        ax.set_xlabel("Horizontal distance (m)")
        ax.set_ylabel("Normalized RSS (dB)" if normalized else "RSS (dBm)")
        if title:
            ax.set_title(title)
        ax.legend(loc="best")
        _save(fig, path)


def plot_comparison(
    model: RssTrace,
    measured: RssTrace,
    report: ComparisonReport,
    path: PathLike,
) -> None:
    """Model and measured traces overlaid, with peaks and floor marked."""
    with matplotlib.rc_context(STYLE):
        fig = _new_figure()
        ax = fig.add_subplot(1, 1, 1)
        for trace, color, style in ((model, COLORS[0], "-"), (measured, COLORS[3], ".")):
            xs, ys = _finite(trace)
            if style == "-":
                ax.plot(xs, ys, style, color=color, label=f"model: {trace.label}")
            else:
                ax.plot(xs, ys, style, color=color, markersize=3,
                        label=f"trace: {trace.label}")
        ax.axvline(report.peak_distance_model, color=COLORS[0], ls="--", lw=0.8)
        ax.axvline(report.peak_distance_trace, color=COLORS[3], ls="--", lw=0.8)
        if report.sensitivity_floor is not None:
            ax.axhline(report.sensitivity_floor, color=COLORS[7], ls=":", lw=0.8,
                       label="sensitivity floor")
        unit = "dB" if model.normalized else "dBm"
        ax.set_xlabel("Horizontal distance (m)")
        ax.set_ylabel(f"RSS ({unit})")
        ax.set_title(f"RMSE {report.rmse_db:.3g} dB over {report.n_points} points")
        ax.legend(loc="best")
        _save(fig, path)


def plot_pattern_gains(
    alphas: Iterable[float], series: dict[str, Sequence[float]], path: PathLike
) -> None:
    """Linear gain versus elevation angle for named gain curves."""
    alphas = list(alphas)
    with matplotlib.rc_context(STYLE):
        fig = _new_figure()
        ax = fig.add_subplot(1, 1, 1)
        for i, (name, gains) in enumerate(series.items()):
            ax.plot(alphas, gains, color=COLORS[i % len(COLORS)], label=name)
        ax.set_xlabel("Elevation angle (deg)")
        ax.set_ylabel("Gain (linear)")
        ax.set_xlim(0, 90)
        ax.legend(loc="best")
        _save(fig, path)
