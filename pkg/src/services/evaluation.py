"""
Path metrics and the weighted path-quality score.

Length and clearance are millimetres, smoothness is the summed turning
angle in radians. Scores are relative to a candidate set; lower is better.
"""
from collections.abc import Sequence
from typing import Union

import numpy as np

from src.core.exceptions import DegenerateTurn, EmptyCandidateSet, TooShort
from src.models.environment import Sbbox
from src.models.geometry import Point2D, Polygon2D
from src.models.path import PathMetrics
from src.schemas.config import EvaluationWeights
from src.services.collision import box_arrays, distance_to_boxes, sample_polyline
from src.services.geometry import point_in_polygon

NO_OBSTACLE_CLEARANCE = 1e9
DENSIFY_SPACING = 1.0

Obstacles = Union[Sequence[Sbbox], Sequence[Polygon2D]]


def path_length(nodes: Sequence[Sequence[float]] | np.ndarray) -> float:
    """
    Sum of segment lengths.

    Raises:
        TooShort: Fewer than two nodes
    """
    pts = np.asarray(nodes, dtype=float)
    if len(pts) < 2:
        raise TooShort(f"Path with {len(pts)} node(s)")
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())


def densify(
    nodes: Sequence[Sequence[float]] | np.ndarray, spacing: float = DENSIFY_SPACING
) -> np.ndarray:
    """Polyline resampled so consecutive points are at most spacing apart."""
    return sample_polyline(np.asarray(nodes, dtype=float), spacing)


def densified_node_count(nodes: Sequence[Sequence[float]] | np.ndarray) -> int:
    """Node count of the polyline at 1 mm spacing."""
    return int(len(densify(nodes)))


def _polygon_distances(points: np.ndarray, polygon: Polygon2D) -> np.ndarray:
    edges = polygon.edges()
    a = np.array([e[0] for e in edges], dtype=float)
    b = np.array([e[1] for e in edges], dtype=float)
    ab = b - a
    length_sq = np.maximum((ab**2).sum(axis=1), 1e-300)
    ap = points[:, None, :] - a[None, :, :]
    t = np.clip((ap * ab[None]).sum(axis=2) / length_sq[None], 0.0, 1.0)
    closest = a[None] + t[..., None] * ab[None]
    dist = np.linalg.norm(points[:, None, :] - closest, axis=2).min(axis=1)
    if len(polygon.vertices) >= 3:
        in_box = (
            (points[:, 0] >= polygon.x_min)
            & (points[:, 0] <= polygon.x_max)
            & (points[:, 1] >= polygon.z_min)
            & (points[:, 1] <= polygon.z_max)
        )
        for i in np.flatnonzero(in_box):
            if point_in_polygon(Point2D(*points[i]), polygon):
                dist[i] = 0.0
    return dist


def path_clearance(samples: Sequence[Sequence[float]] | np.ndarray, obstacles: Obstacles) -> float:
    """
    Smallest distance from any sample to an obstacle boundary.

    Samples inside an obstacle count as 0. Without obstacles the result is
    the 1e9 mm sentinel.
    """
    pts = np.asarray(samples, dtype=float)
    if not obstacles:
        return NO_OBSTACLE_CLEARANCE
    if isinstance(obstacles[0], Sbbox):
        lo, hi = box_arrays(obstacles)  # type: ignore[arg-type]
        return float(distance_to_boxes(pts, lo, hi).min())
    return float(
        min(_polygon_distances(pts, poly).min() for poly in obstacles)  # type: ignore[arg-type]
    )


def path_smoothness(nodes: Sequence[Sequence[float]] | np.ndarray) -> float:
    """
    Sum of turning angles at interior nodes.

    Consecutive duplicate nodes are dropped first.

    Raises:
        TooShort: Fewer than two nodes
        DegenerateTurn: Fewer than two distinct nodes
    """
    pts = np.asarray(nodes, dtype=float)
    if len(pts) < 2:
        raise TooShort(f"Path with {len(pts)} node(s)")
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(np.diff(pts, axis=0) != 0.0, axis=1)
    pts = pts[keep]
    if len(pts) < 2:
        raise DegenerateTurn("All nodes coincide")
    if len(pts) == 2:
        return 0.0
    seg = np.diff(pts, axis=0)
    incoming, outgoing = seg[:-1], seg[1:]
    cos = (incoming * outgoing).sum(axis=1) / (
        np.linalg.norm(incoming, axis=1) * np.linalg.norm(outgoing, axis=1)
    )
    return float(np.arccos(np.clip(cos, -1.0, 1.0)).sum())


def measure_path(
    executed: Sequence[Sequence[float]] | np.ndarray,
    obstacles: Obstacles,
    densify_for_clearance: bool = True,
) -> PathMetrics:
    """
    Metrics of the curve the arm follows.

    Clearance is sampled on the 1 mm densification of a polyline; smoothed
    samples are used as they are.
    """
    pts = np.asarray(executed, dtype=float)
    samples = densify(pts) if densify_for_clearance else pts
    return PathMetrics(
        length=path_length(pts),
        min_clearance=path_clearance(samples, obstacles),
        smoothness=path_smoothness(pts),
    )


def _normalize(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi - lo <= 0.0:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def score_candidates(metrics: Sequence[PathMetrics], weights: EvaluationWeights) -> list[float]:
    """
    Weighted score per candidate, in input order.

    Each metric is min-max normalized over the set; constant metrics
    normalize to 0. Safety contributes 1 minus the normalized clearance,
    so a set with one clearance value pays the full safety weight.

    Raises:
        EmptyCandidateSet: If metrics is empty
    """
    if not metrics:
        raise EmptyCandidateSet("No candidates to score")
    length = _normalize(np.array([m.length for m in metrics], dtype=float))
    safety = 1.0 - _normalize(np.array([m.min_clearance for m in metrics], dtype=float))
    smooth = _normalize(np.array([m.smoothness for m in metrics], dtype=float))
    scores = (
        weights.w_length * length + weights.w_safety * safety + weights.w_smoothness * smooth
    )
    return [float(s) for s in scores]
