"""
Collision tests shared by every planner.

Planar tests follow the orientation predicate exactly and add the two
cases it cannot see: endpoints inside a polygon and segments that enter
and leave a polygon through its vertices. Box tests count a point as
colliding only when it penetrates deeper than a tolerance, so paths that
graze an inflated boundary are accepted.
"""
from collections.abc import Sequence

import numpy as np

from src.models.environment import Sbbox
from src.models.geometry import Point2D, Point3D, Polygon2D
from src.services.geometry import ALGEBRA_TOL, point_in_polygon, points_intersect

SAMPLE_STEP = 0.5
PENETRATION_TOL = 1e-6


# Planar


def _bbox_overlaps(a: Point2D, b: Point2D, polygon: Polygon2D) -> bool:
    return not (
        max(a.x, b.x) < polygon.x_min
        or min(a.x, b.x) > polygon.x_max
        or max(a.z, b.z) < polygon.z_min
        or min(a.z, b.z) > polygon.z_max
    )


def _threads_polygon(a: Point2D, b: Point2D, polygon: Polygon2D) -> bool:
    """Whether ab passes through the interior between vertices lying on it."""
    dx, dz = b.x - a.x, b.z - a.z
    length_sq = dx * dx + dz * dz
    length = length_sq**0.5
    cuts = [0.0, 1.0]
    for v in polygon.vertices:
        cross = (v.x - a.x) * dz - (v.z - a.z) * dx
        if abs(cross) <= ALGEBRA_TOL * length:
            t = ((v.x - a.x) * dx + (v.z - a.z) * dz) / length_sq
            if 0.0 < t < 1.0:
                cuts.append(t)
    if len(cuts) == 2:
        return False
    cuts.sort()
    for t0, t1 in zip(cuts, cuts[1:]):
        if t1 - t0 <= 1e-12:
            continue
        tm = 0.5 * (t0 + t1)
        if point_in_polygon(Point2D(a.x + tm * dx, a.z + tm * dz), polygon):
            return True
    return False


def segment_hits_polygon(a: Point2D, b: Point2D, polygon: Polygon2D) -> bool:
    """Collision test of segment ab against one polygon."""
    if not _bbox_overlaps(a, b, polygon):
        return False
    for c, d in polygon.edges():
        if points_intersect(a, b, c, d):
            return True
    if len(polygon.vertices) < 3:
        return False
    if point_in_polygon(a, polygon) or point_in_polygon(b, polygon):
        return True
    return _threads_polygon(a, b, polygon)


def segment_collides(a: Point2D, b: Point2D, obstacles: Sequence[Polygon2D]) -> bool:
    return any(segment_hits_polygon(a, b, poly) for poly in obstacles)


def colliding_obstacles(
    a: Point2D, b: Point2D, obstacles: Sequence[Polygon2D]
) -> list[int]:
    """Indices of the polygons segment ab collides with."""
    return [i for i, poly in enumerate(obstacles) if segment_hits_polygon(a, b, poly)]


def blocking_polygon(p: Point2D, obstacles: Sequence[Polygon2D]) -> Polygon2D | None:
    """First polygon containing p strictly, if any."""
    for poly in obstacles:
        if point_in_polygon(p, poly):
            return poly
    return None


# Boxes


def box_arrays(obstacles: Sequence[Sbbox], e: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """(lo, hi) corner arrays of shape (M, 3), grown by e."""
    if not obstacles:
        empty = np.empty((0, 3))
        return empty, empty
    lo = np.array([o.min_corner for o in obstacles], dtype=float) - e
    hi = np.array([o.max_corner for o in obstacles], dtype=float) + e
    return lo, hi


def points_in_boxes(
    points: np.ndarray, lo: np.ndarray, hi: np.ndarray, tol: float = PENETRATION_TOL
) -> np.ndarray:
    """
    Boolean mask of points penetrating any box deeper than tol.

    Args:
        points: (N, 3) array
        lo: (M, 3) lower corners
        hi: (M, 3) upper corners
    """
    if len(lo) == 0 or len(points) == 0:
        return np.zeros(len(points), dtype=bool)
    p = points[:, None, :]
    inside = np.all((p > lo[None, :, :] + tol) & (p < hi[None, :, :] - tol), axis=2)
    return inside.any(axis=1)


def sample_polyline(
    points: Sequence[Point3D] | np.ndarray, step: float = SAMPLE_STEP
) -> np.ndarray:
    """Points along a polyline no farther apart than step, vertices included."""
    nodes = np.asarray(points, dtype=float)
    if len(nodes) < 2:
        return nodes
    chunks = []
    for p, q in zip(nodes[:-1], nodes[1:]):
        n = max(1, int(np.ceil(np.linalg.norm(q - p) / step)))
        t = np.linspace(0.0, 1.0, n, endpoint=False)[:, None]
        chunks.append(p + t * (q - p))
    chunks.append(nodes[-1:])
    return np.vstack(chunks)


def polyline_clear_of_boxes(
    points: Sequence[Point3D] | np.ndarray, obstacles: Sequence[Sbbox], e: float
) -> bool:
    """True iff no segment of the polyline penetrates a box inflated by e."""
    if not obstacles:
        return True
    lo, hi = box_arrays(obstacles, e)
    nodes = np.asarray(points, dtype=float)
    if len(nodes) < 2:
        return not points_in_boxes(nodes, lo, hi).any()
    return not any(segment_hits_boxes(p, q, lo, hi) for p, q in zip(nodes[:-1], nodes[1:]))


def segment_hits_boxes(
    p: np.ndarray, q: np.ndarray, lo: np.ndarray, hi: np.ndarray, tol: float = PENETRATION_TOL
) -> bool:
    """
    Exact slab test of segment pq against boxes shrunk by tol.

    A hit requires a parameter interval of positive length inside a box.
    """
    if len(lo) == 0:
        return False
    d = q - p
    lo_s = lo + tol
    hi_s = hi - tol
    t_enter = np.zeros(len(lo))
    t_exit = np.ones(len(lo))
    for k in range(3):
        if abs(d[k]) < 1e-15:
            outside = (p[k] <= lo_s[:, k]) | (p[k] >= hi_s[:, k])
            t_exit = np.where(outside, -1.0, t_exit)
            continue
        t0 = (lo_s[:, k] - p[k]) / d[k]
        t1 = (hi_s[:, k] - p[k]) / d[k]
        t_enter = np.maximum(t_enter, np.minimum(t0, t1))
        t_exit = np.minimum(t_exit, np.maximum(t0, t1))
    return bool(np.any(t_exit - t_enter > 1e-12))


def distance_to_boxes(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """
    Distance from each point to the nearest box boundary; 0 inside a box.

    Returns:
        (N,) array
    """
    p = points[:, None, :]
    outside = np.maximum(np.maximum(lo[None] - p, p - hi[None]), 0.0)
    dist = np.linalg.norm(outside, axis=2)
    return dist.min(axis=1)
