"""
Planar local minima search.

Starting from the straight segment, every iteration finds the segments
that collide, picks for each the lowest obstacle vertex that lies farthest
below it, and inserts a node a safe distance beneath that vertex. The loop
stops once no segment collides.
"""
from collections.abc import Sequence
from typing import Optional

from src.core.exceptions import EmptyVertexSet, NoPathWithinBudget, OutOfBounds, StartOrGoalBlocked
from src.core.logging import get_logger
from src.models.environment import Environment2D
from src.models.enums import TieBreak
from src.models.geometry import Point2D, Polygon2D, Segment2D
from src.models.path import Path2D
from src.schemas.config import PlannerConfig
from src.services.collision import (
    blocking_polygon,
    colliding_obstacles,
    segment_collides,
)
from src.services.environment import validate_environment_2d
from src.services.geometry import (
    ALGEBRA_TOL,
    inflate_polygon,
    point_in_polygon,
    point_segment_line_distance,
    points_intersect,
)

logger = get_logger(__name__)

DEDUP_TOL = 1e-6


def collision_detected(seg: Segment2D, obstacles: Sequence[Polygon2D]) -> bool:
    """
    True iff seg crosses an obstacle edge, starts or ends strictly inside
    an obstacle, or passes through an obstacle between two of its vertices.
    """
    return segment_collides(seg.start, seg.end, obstacles)


def _below_line(v: Point2D, s: Point2D, e_pt: Point2D) -> bool:
    """v on or below the line through s and e_pt; vertical lines count nothing."""
    if e_pt.x == s.x:
        return False
    z_line = s.z + (e_pt.z - s.z) * (v.x - s.x) / (e_pt.x - s.x)
    return v.z <= z_line + ALGEBRA_TOL


def _lowest_vertices(polygon: Polygon2D) -> list[Point2D]:
    return [v for v in polygon.vertices if v.z == polygon.z_min]


def collision_avoiding(
    s: Point2D, e_pt: Point2D, obstacles: Sequence[Polygon2D]
) -> tuple[bool, list[Point2D]]:
    """
    Collect detour candidates for segment s-e_pt.

    For each obstacle, its lowest vertices with x inside the segment's x
    range that lie on or below the line through s and e_pt. The scan always
    covers every obstacle.

    Returns:
        (whether any obstacle edge intersects the segment, candidate vertices)
    """
    x_lo, x_hi = min(s.x, e_pt.x), max(s.x, e_pt.x)
    collides = False
    vertices: list[Point2D] = []
    for polygon in obstacles:
        for v in _lowest_vertices(polygon):
            if x_lo <= v.x <= x_hi and _below_line(v, s, e_pt) and v not in vertices:
                vertices.append(v)
        if not collides and any(points_intersect(s, e_pt, c, d) for c, d in polygon.edges()):
            collides = True
    return collides, vertices


def max_distance_vertex(
    vertices: Sequence[Point2D],
    s: Point2D,
    e_pt: Point2D,
    tie_break: TieBreak = TieBreak.SMALLER_X_THEN_Z,
) -> Point2D:
    """
    Vertex farthest from the line through s and e_pt. Ties go to the
    smaller x by default, or the larger x, and then to the smaller z.

    Raises:
        EmptyVertexSet: If vertices is empty
    """
    if not vertices:
        raise EmptyVertexSet("No candidate vertex below the colliding segment")
    distances = [point_segment_line_distance(v, s, e_pt) for v in vertices]
    best = max(distances)
    tied = [v for v, d in zip(vertices, distances) if d >= best - ALGEBRA_TOL]
    if tie_break == TieBreak.LARGER_X_THEN_Z:
        return min(tied, key=lambda v: (-v.x, v.z))
    return min(tied, key=lambda v: (v.x, v.z))


def add_new_node(
    v: Point2D, config: PlannerConfig, z_floor: Optional[float] = None
) -> Point2D:
    """
    The vertex pushed down by the safe distance.

    Args:
        v: Obstacle vertex
        config: Planner settings (safe_distance_e)
        z_floor: Lowest admissible z, when the plane has bounds

    Raises:
        OutOfBounds: If the node falls to or below z_floor
    """
    node = Point2D(v.x, v.z - config.safe_distance_e)
    if z_floor is not None and node.z <= z_floor:
        raise OutOfBounds(f"Node {tuple(node)} lies below the workspace floor {z_floor}")
    return node


def _settle(
    node: Point2D,
    obstacles: Sequence[Polygon2D],
    config: PlannerConfig,
    z_floor: Optional[float],
) -> Point2D:
    """Move a node that landed inside an obstacle beneath that obstacle."""
    for _ in range(len(obstacles)):
        blocker = blocking_polygon(node, obstacles)
        if blocker is None:
            return node
        node = add_new_node(Point2D(node.x, blocker.z_min), config, z_floor)
    return node


def _fallback_vertex(
    s: Point2D, e_pt: Point2D, obstacles: Sequence[Polygon2D], config: PlannerConfig
) -> Optional[Point2D]:
    """Farthest global lowest vertex of the obstacles the segment hits."""
    hit = colliding_obstacles(s, e_pt, obstacles)
    candidates = [v for i in hit for v in _lowest_vertices(obstacles[i])]
    if not candidates:
        return None
    return max_distance_vertex(candidates, s, e_pt, config.tie_break)


def _is_duplicate(node: Point2D, existing: Sequence[Point2D]) -> bool:
    return any(
        abs(node.x - p.x) <= DEDUP_TOL and abs(node.z - p.z) <= DEDUP_TOL for p in existing
    )


def generate_path_2d(
    start: Point2D,
    end: Point2D,
    obstacles: Sequence[Polygon2D],
    config: PlannerConfig,
    z_floor: Optional[float] = None,
) -> Path2D:
    """
    Plan a polyline from start to end below the given obstacles.

    The obstacles are tested as given; callers inflate them by the safe
    distance when grazing contact must be excluded.

    Args:
        start: First node
        end: Last node
        obstacles: Counter-clockwise polygons
        config: Safe distance and iteration budget
        z_floor: Lowest admissible node z, if bounded

    Returns:
        Collision-free path whose interior nodes are sorted along start->end

    Raises:
        StartOrGoalBlocked: Start or end strictly inside an obstacle
        NoPathWithinBudget: Collisions remain after max_iter iterations, or
            an iteration could not add any node
        OutOfBounds: A node would fall below z_floor
    """
    for name, point in (("start", start), ("end", end)):
        blocker = blocking_polygon(point, obstacles)
        if blocker is not None:
            raise StartOrGoalBlocked(
                f"{name} {tuple(point)} lies inside obstacle '{blocker.obstacle_id}'",
                obstacle_id=blocker.obstacle_id,
            )

    dx, dz = end.x - start.x, end.z - start.z

    def along(p: Point2D) -> float:
        return (p.x - start.x) * dx + (p.z - start.z) * dz

    interior: list[Point2D] = []
    key_points: set[Point2D] = set()

    for iteration in range(config.max_iter + 1):
        nodes = [start, *interior, end]
        colliding = [
            (a, b) for a, b in zip(nodes, nodes[1:]) if segment_collides(a, b, obstacles)
        ]
        if not colliding:
            return Path2D(
                nodes=tuple(nodes),
                key_nodes=tuple(i for i, p in enumerate(nodes) if p in key_points),
                iterations_used=iteration,
            )
        if iteration == config.max_iter:
            break

        added: list[Point2D] = []
        for a, b in colliding:
            _, vertices = collision_avoiding(a, b, obstacles)
            if vertices:
                vertex: Optional[Point2D] = max_distance_vertex(
                    vertices, a, b, config.tie_break
                )
            else:
                vertex = _fallback_vertex(a, b, obstacles, config)
            if vertex is None:
                continue
            node = _settle(add_new_node(vertex, config, z_floor), obstacles, config, z_floor)
            if _is_duplicate(node, [start, end, *interior, *added]):
                continue
            added.append(node)

        logger.debug(
            f"Iteration {iteration + 1}: {len(colliding)} colliding segment(s), "
            f"{len(added)} node(s) added"
        )
        if not added:
            raise NoPathWithinBudget(
                f"Iteration {iteration + 1} added no node while "
                f"{len(colliding)} segment(s) still collide"
            )
        interior = sorted(interior + added, key=along)
        key_points.update(added)

    raise NoPathWithinBudget(f"Collisions remain after {config.max_iter} iterations")


def is_collision_free(path: Path2D, obstacles: Sequence[Polygon2D]) -> bool:
    """Whether every segment of the path passes collision_detected."""
    return not any(
        segment_collides(a, b, obstacles) for a, b in zip(path.nodes, path.nodes[1:])
    )


def point_blocked(p: Point2D, obstacles: Sequence[Polygon2D]) -> bool:
    return any(point_in_polygon(p, poly) for poly in obstacles)


def plan_environment_2d(env2d: Environment2D, config: PlannerConfig) -> Path2D:
    """
    Plan on a planar workspace against obstacles inflated by the safe distance.

    Raises:
        InvariantViolation: Malformed environment
        StartOrGoalBlocked: Start or end inside an inflated obstacle
        NoPathWithinBudget: Budget exhausted
        OutOfBounds: A node would fall below the workspace floor
    """
    e = config.safe_distance_e
    validate_environment_2d(env2d, e)
    inflated = [inflate_polygon(p, e) for p in env2d.obstacles]
    return generate_path_2d(env2d.start, env2d.end, inflated, config, z_floor=env2d.bounds_min.z)
