"""Figures for experiment tables.

Uses the object-oriented matplotlib API with the Agg canvas, so no display
or pyplot state is involved.  Matplotlib is imported lazily; the rest of
the package does not need it.
"""
from __future__ import annotations

from typing import Mapping, Sequence

FIGSIZE = (6.0, 3.8)


def render_series(
    path,
    xs: Sequence[float],
    series: Mapping[str, Sequence[float]],
    xlabel: str,
    ylabel: str,
    title: str = "",
    logy: bool = False,
):
    """Line plot of one or more y-series against ``xs``; format follows the file suffix."""
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=FIGSIZE)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)
    styles = ("o-", "s--", "^:", "d-.")
    for k, (label, ys) in enumerate(series.items()):
        ax.plot(list(xs), [float(y) for y in ys], styles[k % len(styles)], label=label, linewidth=1.4, markersize=4)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title, fontsize=10)
    ax.grid(True, alpha=0.3)
    if len(series) > 1:
        ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    return path
