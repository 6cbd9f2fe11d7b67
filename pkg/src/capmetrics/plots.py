"""Figure rendering to self-contained SVG files.

Figures are companions to the delimited tables, never the only carrier of a
number: every curve and cell here is also written as CSV by the CLI. Output
must be byte-identical across reruns, hence the fixed hash salt (matplotlib
derives clip-path ids from it) and the stripped date metadata.

Data artists carry a ``gid`` naming their series, which ends up as the SVG
group id; downstream checks can locate each curve structurally.
"""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import CorrelationMatrix, TrajectoryPoint

_RC = {
    "svg.hashsalt": "capmetrics",
    "figure.figsize": (8.0, 5.0),
    "axes.grid": True,
    "grid.alpha": 0.3,
}

_FIELD_COLORS = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02")


def _color(index: int) -> str:
    return _FIELD_COLORS[index % len(_FIELD_COLORS)]


def save_figure(fig: "plt.Figure", path: str | Path) -> None:
    # the salt must be in effect while rendering, not at figure creation
    with plt.rc_context({"svg.hashsalt": _RC["svg.hashsalt"]}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def rank_distribution_figure(
    series: Mapping[str, Sequence[float]], metric: str
) -> "plt.Figure":
    """Descending metric value against rank, one step curve per field."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for i, (label, values) in enumerate(sorted(series.items())):
            ranks = range(1, len(values) + 1)
            ax.step(
                ranks,
                values,
                where="mid",
                label=label,
                color=_color(i),
                gid=f"series-{label}",
            )
        ax.set_xlabel("rank")
        ax.set_ylabel(metric)
        ax.set_title(f"{metric} distribution by rank")
        if series:
            ax.legend()
        fig.tight_layout()
    return fig


def trajectory_figure(
    series: Mapping[str, Sequence[TrajectoryPoint]]
) -> "plt.Figure":
    """Field maxima over evaluation years, one line per field."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for i, (label, points) in enumerate(sorted(series.items())):
            ax.plot(
                [p.year for p in points],
                [p.max_cap for p in points],
                label=label,
                color=_color(i),
                gid=f"series-{label}",
            )
        ax.set_xlabel("evaluation year")
        ax.set_ylabel("highest cap")
        ax.set_title("Highest cap per field over time")
        if series:
            ax.legend()
        fig.tight_layout()
    return fig


def author_trajectories_figure(
    series: Mapping[str, Sequence[tuple[int, int]]]
) -> "plt.Figure":
    """Per-author cap trajectories (record setters and current leaders)."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for i, (label, points) in enumerate(sorted(series.items())):
            ax.plot(
                [year for year, _ in points],
                [value for _, value in points],
                label=label,
                color=_color(i),
                linewidth=1.2,
                gid=f"series-{label}",
            )
        ax.set_xlabel("evaluation year")
        ax.set_ylabel("cap")
        ax.set_title("Individual cap trajectories")
        if series and len(series) <= 12:
            ax.legend(fontsize="small")
        fig.tight_layout()
    return fig


def scatter_factors_figure(
    points: Mapping[str, Sequence[tuple[float, float]]],
    factor_label: str,
    metric_label: str,
) -> "plt.Figure":
    """Metric against one factor, colored per field."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        for i, (label, pairs) in enumerate(sorted(points.items())):
            ax.scatter(
                [x for x, _ in pairs],
                [y for _, y in pairs],
                s=12,
                alpha=0.7,
                label=label,
                color=_color(i),
                gid=f"series-{label}",
            )
        ax.set_xlabel(factor_label)
        ax.set_ylabel(metric_label)
        ax.set_title(f"{metric_label} vs {factor_label}")
        if points:
            ax.legend(fontsize="small")
        fig.tight_layout()
    return fig


def rank_citation_profile_figure(
    profiles: Mapping[str, Sequence[int]]
) -> "plt.Figure":
    """Rank-citation curves with their two crossing references.

    One subplot per label: the non-increasing citation curve, the identity
    diagonal whose crossing marks the h-index, and the horizontal line at
    the publication count whose crossing marks cp.
    """
    labels = sorted(profiles)
    ncols = min(2, max(1, len(labels)))
    nrows = -(-max(1, len(labels)) // ncols)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(4.5 * ncols, 3.4 * nrows), squeeze=False
        )
        for index, label in enumerate(labels):
            ax = axes[index // ncols][index % ncols]
            counts = list(profiles[label])
            pub_count = len(counts)
            if counts:
                ax.step(
                    range(1, pub_count + 1),
                    counts,
                    where="mid",
                    color=_color(index),
                    gid=f"profile-{label}",
                )
                limit = max(pub_count, max(counts))
                ax.plot([0, limit], [0, limit], color="gray", linewidth=0.8,
                        linestyle="--", label="count = rank")
                ax.axhline(pub_count, color="black", linewidth=0.8,
                           linestyle=":", label="count = publications")
                ax.legend(fontsize=7)
            ax.set_xlabel("rank")
            ax.set_ylabel("citations")
            ax.set_title(label, fontsize=9)
        for index in range(len(labels), nrows * ncols):
            axes[index // ncols][index % ncols].set_visible(False)
        fig.tight_layout()
    return fig


def _draw_heat_axes(ax: "plt.Axes", matrix: CorrelationMatrix, title: str) -> None:
    rows, cols = matrix.row_labels, matrix.col_labels
    grid = [
        [matrix.cell(r, c).r if matrix.cell(r, c).defined else 0.0 for c in cols]
        for r in rows
    ]
    ax.imshow(grid, cmap="RdBu_r", vmin=-1.0, vmax=1.0, aspect="auto")
    for i, r in enumerate(rows):
        for j, c in enumerate(cols):
            cell = matrix.cell(r, c)
            # undefined cells are labeled distinctly, never drawn as numbers
            text = f"{cell.r:.2f}" if cell.defined else "n/a"
            color = "black" if not cell.defined or abs(cell.r) < 0.6 else "white"
            ax.text(j, i, text, ha="center", va="center", fontsize=8, color=color)
    ax.set_xticks(range(len(cols)), cols, rotation=45, ha="right", fontsize=8)
    ax.set_yticks(range(len(rows)), rows, fontsize=8)
    ax.set_title(title, fontsize=9)
    ax.grid(False)


def correlation_heat_figure(
    matrices: Mapping[str, CorrelationMatrix], title: str
) -> "plt.Figure":
    """One heat table per scope (field or aggregation), on a shared figure."""
    scopes = sorted(matrices)
    ncols = min(3, max(1, len(scopes)))
    nrows = -(-len(scopes) // ncols)
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(4.0 * ncols, 3.4 * nrows), squeeze=False
        )
        for index, scope in enumerate(scopes):
            ax = axes[index // ncols][index % ncols]
            _draw_heat_axes(ax, matrices[scope], scope)
        for index in range(len(scopes), nrows * ncols):
            axes[index // ncols][index % ncols].set_visible(False)
        fig.suptitle(title, fontsize=11)
        fig.tight_layout(rect=(0, 0, 1, 0.96))
    return fig
