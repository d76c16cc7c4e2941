"""
B-spline smoothing of planner polylines via de Boor's algorithm.
"""
from bisect import bisect_right
from collections.abc import Sequence

import numpy as np

from src.core.exceptions import ParameterOutOfRange, TooFewControlPoints
from src.models.environment import Sbbox
from src.models.geometry import Point3D
from src.schemas.config import SplineConfig
from src.services.collision import polyline_clear_of_boxes

_RANGE_TOL = 1e-12


def knot_vector(n_control: int, degree: int, clamped: bool = True) -> list[float]:
    """
    Uniform knot vector of length n_control + degree + 1 on [0, 1].

    Clamped vectors repeat each end knot degree + 1 times.

    Raises:
        TooFewControlPoints: If n_control <= degree
    """
    if n_control <= degree:
        raise TooFewControlPoints(
            f"{n_control} control point(s) cannot carry a degree-{degree} spline"
        )
    if clamped:
        interior = np.linspace(0.0, 1.0, n_control + 1 - degree)
        return [0.0] * degree + [float(k) for k in interior] + [1.0] * degree
    return [float(k) for k in np.linspace(0.0, 1.0, n_control + degree + 1)]


def parameter_range(knots: Sequence[float], n_control: int, degree: int) -> tuple[float, float]:
    return knots[degree], knots[n_control]


def _span(knots: Sequence[float], n_control: int, degree: int, t: float) -> int:
    k = bisect_right(knots, t) - 1
    return max(degree, min(k, n_control - 1))


def de_boor(
    knots: Sequence[float],
    control_points: Sequence[Point3D],
    degree: int,
    t: float,
) -> Point3D:
    """
    Evaluate the spline at t.

    Raises:
        ParameterOutOfRange: If t lies outside [knots[degree], knots[n]]
    """
    n = len(control_points)
    lo, hi = parameter_range(knots, n, degree)
    if not lo - _RANGE_TOL <= t <= hi + _RANGE_TOL:
        raise ParameterOutOfRange(f"t={t} outside [{lo}, {hi}]")
    t = min(max(t, lo), hi)

    k = _span(knots, n, degree, t)
    d = [list(control_points[j + k - degree]) for j in range(degree + 1)]
    for r in range(1, degree + 1):
        for j in range(degree, r - 1, -1):
            left = knots[j + k - degree]
            denom = knots[j + 1 + k - r] - left
            alpha = (t - left) / denom if denom != 0.0 else 0.0
            prev, cur = d[j - 1], d[j]
            d[j] = [(1.0 - alpha) * prev[c] + alpha * cur[c] for c in range(3)]
    return Point3D(*d[degree])


def generate_bspline_3d(
    control_points: Sequence[Point3D], config: SplineConfig
) -> list[Point3D]:
    """
    Sample the spline through the path nodes.

    Every non-empty knot span contributes samples_per_segment parameters;
    spans are half-open except the last, so no sample repeats at a joint.
    Paths with too few nodes for the degree are returned unchanged.
    """
    points = [Point3D(*p) for p in control_points]
    n = len(points)
    degree = config.degree
    if n <= degree:
        return points

    knots = knot_vector(n, degree, config.clamped)
    spans = [j for j in range(degree, n) if knots[j] < knots[j + 1]]
    samples: list[Point3D] = []
    for index, j in enumerate(spans):
        last = index == len(spans) - 1
        for t in np.linspace(knots[j], knots[j + 1], config.samples_per_segment, endpoint=last):
            samples.append(de_boor(knots, points, degree, float(t)))
    return samples


def validate_smoothed(samples: Sequence[Point3D], obstacles: Sequence[Sbbox], e: float) -> bool:
    """True iff the sampled curve stays out of every box inflated by e."""
    if len(samples) < 2:
        return True
    return polyline_clear_of_boxes(samples, obstacles, e)
