"""
SVG figures for benchmark results and planned paths.

Output is byte-stable for identical inputs: text stays text, the SVG id
salt is fixed and no creation date is embedded.
"""
import io
from collections.abc import Sequence
from pathlib import Path
from typing import Optional, Union

import matplotlib as mpl

mpl.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Polygon as PolygonPatch  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from src.core.exceptions import EmptyInput  # noqa: E402
from src.models.enums import Metric  # noqa: E402
from src.models.environment import Environment, Environment2D  # noqa: E402
from src.models.trial import TrialRecord  # noqa: E402
from src.services.bench import metric_groups, sweep_series  # noqa: E402
from src.services.geometry import inflate_polygon  # noqa: E402
from src.utils.files import atomic_write_bytes  # noqa: E402

SVG_STYLE = {
    "svg.fonttype": "none",
    "svg.hashsalt": "ilmsa",
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
}

SWEEP_METRICS = (Metric.TIME, Metric.LENGTH, Metric.NODES)


def _render(fig: plt.Figure) -> bytes:
    buffer = io.BytesIO()
    try:
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return buffer.getvalue()


def _save(fig: plt.Figure, path: Union[str, Path]) -> None:
    atomic_write_bytes(path, _render(fig))


def emit_svg_plot(
    records: Sequence[TrialRecord],
    metric: Metric,
    path: Union[str, Path],
    groups: Optional[Sequence[str]] = None,
) -> None:
    """
    Bar chart of a metric's mean per algorithm, with standard deviation
    error bars, over the successful trials.

    Raises:
        EmptyInput: No records, or no successful trial carries the metric
        IoError: Path not writable
    """
    if not records:
        raise EmptyInput("No trial records to plot")
    values = metric_groups(records, metric, groups)
    if not any(values.values()):
        raise EmptyInput(f"No successful trial has a {metric.value} value")

    labels = list(values)
    means = [float(np.mean(v)) if v else 0.0 for v in values.values()]
    stds = [float(np.std(v, ddof=1)) if len(v) > 1 else 0.0 for v in values.values()]

    with mpl.rc_context(SVG_STYLE):
        fig, ax = plt.subplots(figsize=(1.2 + 0.9 * len(labels), 3.2))
        positions = np.arange(len(labels))
        ax.bar(positions, means, yerr=stds, capsize=4, color="0.65", edgecolor="0.2")
        ax.set_xticks(positions)
        ax.set_xticklabels(labels)
        ax.set_ylabel(metric.axis_label)
        fig.tight_layout()
        _save(fig, path)


def emit_sweep_plot(
    records: Sequence[TrialRecord],
    path: Union[str, Path],
    metrics: Sequence[Metric] = SWEEP_METRICS,
    algorithm: Optional[str] = None,
) -> None:
    """
    Mean of each metric against the obstacle count, one panel and one
    polyline per metric.

    Raises:
        EmptyInput: No successful records to plot
        IoError: Path not writable
    """
    selected = [r for r in records if algorithm is None or r.algorithm == algorithm]
    if not any(r.success for r in selected):
        raise EmptyInput("No successful trial records to plot")

    with mpl.rc_context(SVG_STYLE):
        fig, axes = plt.subplots(1, len(metrics), figsize=(3.0 * len(metrics), 3.0), squeeze=False)
        for ax, metric in zip(axes[0], metrics):
            counts, means = sweep_series(selected, metric)
            ax.plot(counts, means, marker="o", color="0.1", linewidth=1.2)
            ax.set_xlabel("obstacle count")
            ax.set_ylabel(metric.axis_label)
            if counts:
                ax.set_xticks(counts)
        fig.tight_layout()
        _save(fig, path)


def _draw_polygons(ax: plt.Axes, polygons: Sequence[np.ndarray], inflated: bool) -> None:
    for verts in polygons:
        if inflated:
            patch = PolygonPatch(verts, closed=True, fill=False, linestyle="--", edgecolor="0.5")
        else:
            patch = PolygonPatch(verts, closed=True, facecolor="#d9534f", alpha=0.6)
        ax.add_patch(patch)


def plot_path(
    env: Union[Environment, Environment2D],
    nodes: Sequence[Sequence[float]],
    path: Union[str, Path],
    e: float,
    smoothed: Sequence[Sequence[float]] = (),
) -> None:
    """Draw a planned path over its workspace into an SVG file."""
    atomic_write_bytes(path, render_path(env, nodes, e, smoothed))


def render_path(
    env: Union[Environment, Environment2D],
    nodes: Sequence[Sequence[float]],
    e: float,
    smoothed: Sequence[Sequence[float]] = (),
) -> bytes:
    """
    SVG bytes of a planned path drawn over its workspace.

    3D workspaces get an x-z and an x-y panel; planar ones a single x-z
    panel. Raw obstacles are filled, inflated ones dashed.
    """
    pts = np.asarray(nodes, dtype=float)
    curve = np.asarray(smoothed, dtype=float) if len(smoothed) else None

    with mpl.rc_context(SVG_STYLE):
        if isinstance(env, Environment2D):
            fig, ax = plt.subplots(figsize=(5.0, 4.0))
            panels = [(ax, (0, 1), ("x (mm)", "z (mm)"))]
            raw = [np.asarray(p.vertices, dtype=float) for p in env.obstacles]
            grown = [np.asarray(inflate_polygon(p, e).vertices, dtype=float) for p in env.obstacles]
            _draw_polygons(ax, raw, inflated=False)
            _draw_polygons(ax, grown, inflated=True)
            lo, hi = np.asarray(env.bounds_min), np.asarray(env.bounds_max)
        else:
            fig, (ax_xz, ax_xy) = plt.subplots(1, 2, figsize=(9.0, 4.0))
            panels = [(ax_xz, (0, 2), ("x (mm)", "z (mm)")), (ax_xy, (0, 1), ("x (mm)", "y (mm)"))]
            for ax, (i, j), _ in panels:
                for box in env.obstacles:
                    for grow, inflated in ((0.0, False), (e, True)):
                        lo_b = np.asarray(box.min_corner) - grow
                        hi_b = np.asarray(box.max_corner) + grow
                        ax.add_patch(
                            Rectangle(
                                (lo_b[i], lo_b[j]),
                                hi_b[i] - lo_b[i],
                                hi_b[j] - lo_b[j],
                                fill=not inflated,
                                facecolor="#d9534f" if not inflated else "none",
                                alpha=0.6 if not inflated else 1.0,
                                linestyle="--" if inflated else "-",
                                edgecolor="0.5",
                            )
                        )
            lo, hi = np.asarray(env.bounds_min), np.asarray(env.bounds_max)

        for ax, (i, j), (xlabel, ylabel) in panels:
            ax.plot(pts[:, i], pts[:, j], "o-", color="0.15", markersize=3, linewidth=1.0)
            if curve is not None:
                ax.plot(curve[:, i], curve[:, j], "-", color="#337ab7", linewidth=1.4)
            ax.set_xlim(lo[i], hi[i])
            ax.set_ylim(lo[j], hi[j])
            ax.set_aspect("equal")
            ax.set_xlabel(xlabel)
            ax.set_ylabel(ylabel)
        fig.tight_layout()
        return _render(fig)
