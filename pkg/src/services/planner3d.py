"""
3D planning by plane sweep.

Planes through start and end are rotated about the start-end axis in
delta_theta steps. On each plane the part of every inflated box lying in a
slab around the plane (the plane itself by default) is projected to a convex
polygon, the planar search runs in the plane's chart, and the result is
lifted back, re-checked against the boxes, smoothed and scored. The best
scoring candidate wins. Setting the slab width to None projects whole boxes.
"""
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Optional

import numpy as np

from src.core.exceptions import (
    DegenerateHull,
    GeometryError,
    NoFeasiblePlane,
    NoPathError,
    PlannerError,
)
from src.core.logging import get_logger, run_logger
from src.models.environment import Environment, Sbbox
from src.models.geometry import Plane, Point2D, Point3D, Polygon2D
from src.models.path import HarvestLeg, HarvestRun, Path3D, PlaneCandidate
from src.schemas.config import SweepConfig
from src.services.collision import polyline_clear_of_boxes
from src.services.environment import harvest_sequence, validate_environment
from src.services.evaluation import measure_path, score_candidates
from src.services.geometry import (
    build_plane,
    chart_points,
    convex_hull_2d,
    from_plane_coords,
    sweep_angles,
    to_plane_coords,
)
from src.services.ilmsa_planner import generate_path_2d
from src.services.smoothing import generate_bspline_3d, validate_smoothed

logger = get_logger(__name__)

ALGORITHM = "ilmsa3d"
SLAB_TOL = 1e-9


def project_obstacles_on_plane(plane: Plane, obstacles: Sequence[Sbbox]) -> list[Polygon2D]:
    """
    Convex outline of each box's projection, in the plane's chart.

    A box whose projection collapses to a segment becomes a two-vertex
    obstacle. Output order follows input order.
    """
    if not obstacles:
        return []
    corners = np.array([c for box in obstacles for c in box.corners()], dtype=float)
    charted = chart_points(plane, corners).reshape(len(obstacles), 8, 2)

    polygons: list[Polygon2D] = []
    for box, pts in zip(obstacles, charted):
        outline = _outline(pts, box.fruit_id)
        if outline is not None:
            polygons.append(outline)
    return polygons


def _outline(charted: np.ndarray, fruit_id: str) -> Optional[Polygon2D]:
    points = [Point2D(float(u), float(v)) for u, v in charted]
    try:
        return convex_hull_2d(points, obstacle_id=fruit_id)
    except DegenerateHull:
        ordered = sorted(set(points))
        if len(ordered) < 2:
            return None
        return Polygon2D((ordered[0], ordered[-1]), obstacle_id=fruit_id)


# Corner index pairs of the 12 edges; Sbbox.corners() varies z fastest, then y, then x.
_BOX_EDGES = tuple((i, i | bit) for bit in (4, 2, 1) for i in range(8) if not i & bit)


def slab_vertices(plane: Plane, box: Sbbox, half_width: float) -> np.ndarray:
    """
    Vertices of the part of box lying within half_width of the plane.

    These are the box corners inside the slab plus the points where box
    edges cross the slab faces. A zero width gives the cross-section.

    Returns:
        (N, 3) array; N is 0 when the box misses the slab
    """
    corners = np.array(box.corners(), dtype=float)
    s = corners @ np.asarray(plane.normal, dtype=float) + plane.d
    parts = [corners[np.abs(s) <= half_width + SLAB_TOL]]
    levels = (0.0,) if half_width == 0.0 else (-half_width, half_width)
    for i, j in _BOX_EDGES:
        for level in levels:
            si, sj = s[i] - level, s[j] - level
            if si * sj < 0.0:
                t = si / (si - sj)
                parts.append((corners[i] + t * (corners[j] - corners[i]))[None, :])
    return np.vstack(parts)


def section_obstacles_on_plane(
    plane: Plane, obstacles: Sequence[Sbbox], half_width: float
) -> list[Polygon2D]:
    """
    Convex outline of the part of each box near the plane, in the chart.

    Boxes that miss the slab are left out; the others keep input order.
    """
    polygons: list[Polygon2D] = []
    for box in obstacles:
        pts = slab_vertices(plane, box, half_width)
        if len(pts) == 0:
            continue
        outline = _outline(chart_points(plane, pts), box.fruit_id)
        if outline is not None:
            polygons.append(outline)
    return polygons


def _rejected(plane: Plane, reason: str) -> PlaneCandidate:
    run_logger.log_candidate_rejected(plane.theta, reason)
    return PlaneCandidate(
        plane=plane, raw_path=None, lifted_path=(), feasible=False, failure_reason=reason
    )


def plan_on_plane(env: Environment, theta: float, config: SweepConfig) -> PlaneCandidate:
    """
    Plan on the plane at sweep angle theta.

    Planner failures never propagate; they mark the candidate infeasible
    with the failure's class name as the reason.
    """
    e = config.planner.safe_distance_e
    plane = build_plane(env.start, env.end, theta)
    inflated = [box.inflated(e) for box in env.obstacles]
    if config.slab_half_width is None:
        polygons = project_obstacles_on_plane(plane, inflated)
    else:
        polygons = section_obstacles_on_plane(plane, inflated, config.slab_half_width)

    start2 = to_plane_coords(plane, env.start)
    end2 = to_plane_coords(plane, env.end)
    try:
        raw = generate_path_2d(start2, end2, polygons, config.planner)
    except (NoPathError, GeometryError) as exc:
        return _rejected(plane, type(exc).__name__)

    lifted = [from_plane_coords(plane, q) for q in raw.nodes]
    lifted[0], lifted[-1] = env.start, env.end

    if not all(env.in_bounds(p) for p in lifted):
        return _rejected(plane, "OutOfBounds")
    if not polyline_clear_of_boxes(lifted, env.obstacles, e):
        return _rejected(plane, "CollisionIn3D")

    return PlaneCandidate(plane=plane, raw_path=raw, lifted_path=tuple(lifted), feasible=True)


def smooth_and_measure(
    candidate: PlaneCandidate, env: Environment, config: SweepConfig
) -> PlaneCandidate:
    """
    Smooth a feasible candidate and attach its metrics.

    A smoothed curve that enters an inflated box is dropped and the
    polyline is measured instead.
    """
    if not candidate.feasible:
        return candidate
    nodes = candidate.lifted_path
    smoothed: tuple[Point3D, ...] = ()
    if len(nodes) > config.spline.degree:
        curve = generate_bspline_3d(nodes, config.spline)
        if validate_smoothed(curve, env.obstacles, config.planner.safe_distance_e):
            smoothed = tuple(curve)

    if smoothed:
        metrics = measure_path(smoothed, env.obstacles, densify_for_clearance=False)
    else:
        metrics = measure_path(nodes, env.obstacles)
    return replace(candidate, smoothed=smoothed, smoothing_valid=bool(smoothed), metrics=metrics)


def _evaluate_plane(env: Environment, theta: float, config: SweepConfig) -> PlaneCandidate:
    return smooth_and_measure(plan_on_plane(env, theta, config), env, config)


def plan_3d(env: Environment, config: SweepConfig) -> tuple[Path3D, list[PlaneCandidate]]:
    """
    Sweep every plane, score the feasible candidates and pick the lowest score.

    Ties go to the smaller sweep angle. Results do not depend on the
    number of workers.

    Args:
        env: Workspace
        config: Sweep, planner, smoothing and scoring settings

    Returns:
        (best path, all candidates in sweep order; feasible ones carry scores)

    Raises:
        StartOrGoalBlocked: Start or end inside an inflated box
        NoFeasiblePlane: Every plane failed
    """
    validate_environment(env, config.planner.safe_distance_e)
    thetas = sweep_angles(config.delta_theta)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            candidates = list(pool.map(lambda t: _evaluate_plane(env, t, config), thetas))
    else:
        candidates = [_evaluate_plane(env, t, config) for t in thetas]

    feasible_idx = [i for i, c in enumerate(candidates) if c.feasible]
    if not feasible_idx:
        raise NoFeasiblePlane(f"All {len(candidates)} planes failed")

    scores = score_candidates(
        [candidates[i].metrics for i in feasible_idx],  # type: ignore[misc]
        config.weights,
    )
    for i, score in zip(feasible_idx, scores):
        metrics = candidates[i].metrics
        assert metrics is not None
        candidates[i] = replace(candidates[i], metrics=replace(metrics, score=score))

    best_i = feasible_idx[int(np.argmin(scores))]
    best = candidates[best_i]
    assert best.raw_path is not None
    path = Path3D(
        nodes=best.lifted_path,
        algorithm=ALGORITHM,
        key_node_count=len(best.raw_path.key_nodes),
        smoothed=best.smoothed,
        plane_theta_deg=best.theta,
        metrics=best.metrics,
    )
    logger.info(
        f"Selected plane {best.theta:g} deg from {len(feasible_idx)}/{len(candidates)} feasible",
        extra={"theta_deg": best.theta, "algorithm": ALGORITHM},
    )
    return path, candidates


def plan_harvest_run(env: Environment, config: SweepConfig) -> HarvestRun:
    """
    Visit every target bottom to top, planning each leg with plan_3d.

    Leg obstacles are the fruits not yet picked, minus the leg's own fruit.
    A failed leg leaves the arm where it is and its fruit in place.
    """
    position = env.start
    remaining: dict[str, Sbbox] = {box.fruit_id: box for box in env.obstacles}
    legs: list[HarvestLeg] = []

    for target in harvest_sequence(list(env.targets)):
        obstacles = tuple(b for fid, b in remaining.items() if fid != target.fruit_id)
        started = time.perf_counter()
        try:
            leg_env = replace(
                env, start=position, end=target.center, obstacles=obstacles, targets=()
            )
            path, _ = plan_3d(leg_env, config)
        except PlannerError as exc:
            elapsed = (time.perf_counter() - started) * 1000.0
            legs.append(
                HarvestLeg(
                    fruit_id=target.fruit_id,
                    start=position,
                    goal=target.center,
                    path=None,
                    failure_reason=f"{type(exc).__name__}: {exc}",
                    planning_time_ms=elapsed,
                )
            )
            continue
        elapsed = (time.perf_counter() - started) * 1000.0
        legs.append(
            HarvestLeg(
                fruit_id=target.fruit_id,
                start=position,
                goal=target.center,
                path=path,
                planning_time_ms=elapsed,
            )
        )
        position = target.center
        remaining.pop(target.fruit_id, None)

    return HarvestRun(legs=tuple(legs))

