"""
Comparison planners: grid A*, RRT and RRT-Connect on the xoz projection,
goal-biased RRT in 3D, and the lowest-point heuristic (LPS) in 3D.

Every planner inflates obstacles by clearance_e before testing, and every
sampling planner draws from np.random.default_rng(rng_seed) only.
"""
import heapq
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from src.core.exceptions import CorridorBlocked, NoPath, StartOrGoalBlocked
from src.core.logging import get_logger
from src.models.enums import Algorithm
from src.models.environment import Environment, Environment2D, Sbbox
from src.models.geometry import Point2D, Point3D, Polygon2D
from src.models.path import Path2D, Path3D
from src.schemas.config import BaselineConfig
from src.services.collision import (
    blocking_polygon,
    box_arrays,
    polyline_clear_of_boxes,
    segment_collides,
    segment_hits_boxes,
)
from src.services.environment import validate_environment
from src.services.geometry import inflate_polygon, point_to_segment_distance

logger = get_logger(__name__)


def _inflated_polygons(env2d: Environment2D, e: float) -> list[Polygon2D]:
    return [inflate_polygon(p, e) for p in env2d.obstacles]


def _check_endpoints_2d(env2d: Environment2D, obstacles: Sequence[Polygon2D]) -> None:
    for name, point in (("start", env2d.start), ("goal", env2d.end)):
        blocker = blocking_polygon(point, obstacles)
        if blocker is not None:
            raise StartOrGoalBlocked(
                f"{name} {tuple(point)} lies inside obstacle '{blocker.obstacle_id}'",
                obstacle_id=blocker.obstacle_id,
            )


# Grid A*


@dataclass(frozen=True)
class OccupancyGrid:
    """Cells of side `resolution`; blocked[i, j] for the cell at column i, row j."""

    origin: Point2D
    resolution: float
    blocked: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.blocked.shape  # type: ignore[return-value]

    def center(self, cell: tuple[int, int]) -> Point2D:
        return Point2D(
            self.origin.x + (cell[0] + 0.5) * self.resolution,
            self.origin.z + (cell[1] + 0.5) * self.resolution,
        )

    def cell_of(self, p: Point2D) -> tuple[int, int]:
        nx, nz = self.shape
        i = int(math.floor((p.x - self.origin.x) / self.resolution))
        j = int(math.floor((p.z - self.origin.z) / self.resolution))
        return min(max(i, 0), nx - 1), min(max(j, 0), nz - 1)


def _convex_mask(xs: np.ndarray, zs: np.ndarray, polygon: Polygon2D) -> np.ndarray:
    """Cells whose centers lie inside or on a convex counter-clockwise polygon."""
    mask = np.ones(xs.shape, dtype=bool)
    verts = polygon.vertices
    for k in range(len(verts)):
        a, b = verts[k], verts[(k + 1) % len(verts)]
        cross = (b.x - a.x) * (zs - a.z) - (b.z - a.z) * (xs - a.x)
        mask &= cross >= -1e-9
    return mask


def build_occupancy_grid(env2d: Environment2D, config: BaselineConfig) -> OccupancyGrid:
    """
    Rasterize the workspace.

    A cell is blocked when its center lies within clearance_e plus half a
    cell diagonal of an obstacle, so a straight move between two free
    centers never enters an obstacle inflated by clearance_e.
    """
    r = config.grid_resolution
    nx = max(1, int(math.ceil((env2d.bounds_max.x - env2d.bounds_min.x) / r)))
    nz = max(1, int(math.ceil((env2d.bounds_max.z - env2d.bounds_min.z) / r)))
    xs = env2d.bounds_min.x + (np.arange(nx) + 0.5) * r
    zs = env2d.bounds_min.z + (np.arange(nz) + 0.5) * r
    gx, gz = np.meshgrid(xs, zs, indexing="ij")

    margin = config.clearance_e + r * math.sqrt(2.0) / 2.0
    blocked = np.zeros((nx, nz), dtype=bool)
    for polygon in env2d.obstacles:
        blocked |= _convex_mask(gx, gz, inflate_polygon(polygon, margin))
    return OccupancyGrid(origin=env2d.bounds_min, resolution=r, blocked=blocked)


class GridAStar:
    """8-connected A* with a Euclidean heuristic; costs in millimetres."""

    directions = [
        (0, 1), (0, -1), (1, 0), (-1, 0),
        (1, 1), (-1, -1), (1, -1), (-1, 1),
    ]

    def __init__(self, grid: OccupancyGrid):
        self.grid = grid
        self.cols, self.rows = grid.shape

    def _heuristic(self, a: tuple[int, int], b: tuple[int, int]) -> float:
        return math.hypot(a[0] - b[0], a[1] - b[1]) * self.grid.resolution

    def _step_cost(self, d: tuple[int, int]) -> float:
        return (math.sqrt(2.0) if d[0] and d[1] else 1.0) * self.grid.resolution

    def _reconstruct_path(
        self, came_from: dict[tuple[int, int], tuple[int, int]], current: tuple[int, int]
    ) -> list[tuple[int, int]]:
        path = [current]
        while current in came_from:
            current = came_from[current]
            path.append(current)
        path.reverse()
        return path

    def search(
        self, start: tuple[int, int], goal: tuple[int, int]
    ) -> tuple[list[tuple[int, int]], float]:
        """
        Returns:
            (cells from start to goal, path cost in mm)

        Raises:
            NoPath: If the goal cell is unreachable
        """
        open_list: list[tuple[float, int, tuple[int, int]]] = []
        counter = 0
        heapq.heappush(open_list, (self._heuristic(start, goal), counter, start))
        g_score = {start: 0.0}
        came_from: dict[tuple[int, int], tuple[int, int]] = {}
        closed: set[tuple[int, int]] = set()
        blocked = self.grid.blocked

        while open_list:
            _, _, current = heapq.heappop(open_list)
            if current in closed:
                continue
            if current == goal:
                return self._reconstruct_path(came_from, current), g_score[current]
            closed.add(current)

            for d in self.directions:
                neighbor = (current[0] + d[0], current[1] + d[1])
                if not (0 <= neighbor[0] < self.cols and 0 <= neighbor[1] < self.rows):
                    continue
                if blocked[neighbor] or neighbor in closed:
                    continue
                tentative = g_score[current] + self._step_cost(d)
                if tentative < g_score.get(neighbor, math.inf):
                    came_from[neighbor] = current
                    g_score[neighbor] = tentative
                    counter += 1
                    heapq.heappush(
                        open_list, (tentative + self._heuristic(neighbor, goal), counter, neighbor)
                    )

        raise NoPath(f"Goal cell {goal} unreachable from {start}")


def _attach(
    grid: OccupancyGrid, p: Point2D, obstacles: Sequence[Polygon2D], rings: int = 3
) -> tuple[int, int]:
    """Nearest free cell whose center p reaches by a collision-free segment."""
    ci, cj = grid.cell_of(p)
    cols, rows = grid.shape
    candidates = [
        (i, j)
        for i in range(ci - rings, ci + rings + 1)
        for j in range(cj - rings, cj + rings + 1)
        if 0 <= i < cols and 0 <= j < rows and not grid.blocked[i, j]
    ]
    candidates.sort(key=lambda c: (math.dist(grid.center(c), p), c))
    for cell in candidates:
        center = grid.center(cell)
        if center == p or not segment_collides(p, center, obstacles):
            return cell
    raise NoPath(f"No free grid cell reachable from {tuple(p)}")


def astar_2d(env2d: Environment2D, config: BaselineConfig) -> Path2D:
    """
    Grid A* from start to goal.

    The path is start, the visited cell centers, then the goal.

    Raises:
        StartOrGoalBlocked: Start or goal inside an inflated obstacle
        NoPath: Goal unreachable on the grid
    """
    obstacles = _inflated_polygons(env2d, config.clearance_e)
    _check_endpoints_2d(env2d, obstacles)
    grid = build_occupancy_grid(env2d, config)

    start_cell = _attach(grid, env2d.start, obstacles)
    goal_cell = _attach(grid, env2d.end, obstacles)
    cells, cost = GridAStar(grid).search(start_cell, goal_cell)

    nodes: list[Point2D] = [env2d.start]
    for cell in cells:
        center = grid.center(cell)
        if center != nodes[-1]:
            nodes.append(center)
    if env2d.end != nodes[-1]:
        nodes.append(env2d.end)
    else:
        nodes[-1] = env2d.end
    logger.debug(f"A* expanded to cost {cost:.3f} mm over {len(cells)} cells")
    return Path2D(nodes=tuple(nodes), key_nodes=tuple(range(1, len(nodes) - 1)))


# Sampling planners


class _Tree:
    """RRT tree with a preallocated vertex array for nearest queries."""

    def __init__(self, root: np.ndarray, capacity: int):
        self.points = np.empty((capacity + 2, len(root)))
        self.points[0] = root
        self.parents = [-1]
        self.count = 1

    def add(self, p: np.ndarray, parent: int) -> int:
        self.points[self.count] = p
        self.parents.append(parent)
        self.count += 1
        return self.count - 1

    def nearest(self, q: np.ndarray) -> int:
        diff = self.points[: self.count] - q
        return int(np.argmin(np.einsum("ij,ij->i", diff, diff)))

    def path_to(self, index: int) -> list[np.ndarray]:
        """Vertices from the root to index."""
        path = []
        while index != -1:
            path.append(self.points[index].copy())
            index = self.parents[index]
        path.reverse()
        return path


def _steer(source: np.ndarray, target: np.ndarray, step: float) -> np.ndarray:
    delta = target - source
    distance = float(np.linalg.norm(delta))
    if distance <= step:
        return target.copy()
    return source + delta * (step / distance)


SegmentTest = Callable[[np.ndarray, np.ndarray], bool]


def _rrt(
    start: np.ndarray,
    goal: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    collides: SegmentTest,
    config: BaselineConfig,
) -> list[np.ndarray]:
    rng = np.random.default_rng(config.rng_seed)
    tree = _Tree(start, config.max_samples)
    step = config.step_size

    for _ in range(config.max_samples):
        q = goal if rng.random() < config.goal_bias else rng.uniform(lo, hi)
        near = tree.nearest(q)
        new = _steer(tree.points[near], q, step)
        if np.array_equal(new, tree.points[near]) or collides(tree.points[near], new):
            continue
        index = tree.add(new, near)
        if np.array_equal(new, goal):
            return tree.path_to(index)
        if np.linalg.norm(goal - new) <= step and not collides(new, goal):
            return tree.path_to(tree.add(goal.copy(), index))

    raise NoPath(f"Goal not reached after {config.max_samples} samples")


_TRAPPED, _ADVANCED, _REACHED = 0, 1, 2


def _extend(
    tree: _Tree, q: np.ndarray, step: float, collides: SegmentTest
) -> tuple[int, int]:
    near = tree.nearest(q)
    new = _steer(tree.points[near], q, step)
    if np.array_equal(new, tree.points[near]):
        return (_REACHED, near) if np.array_equal(new, q) else (_TRAPPED, near)
    if collides(tree.points[near], new):
        return _TRAPPED, near
    index = tree.add(new, near)
    return (_REACHED if np.array_equal(new, q) else _ADVANCED), index


def _rrt_connect(
    start: np.ndarray,
    goal: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    collides: SegmentTest,
    config: BaselineConfig,
) -> list[np.ndarray]:
    rng = np.random.default_rng(config.rng_seed)
    # Each connect phase may add many vertices.
    capacity = config.max_samples * (
        2 + int(np.linalg.norm(hi - lo) / config.step_size)
    )
    trees = [_Tree(start, capacity), _Tree(goal, capacity)]
    from_start = [True, False]
    step = config.step_size

    for _ in range(config.max_samples):
        q = rng.uniform(lo, hi)
        status, new_index = _extend(trees[0], q, step, collides)
        if status != _TRAPPED:
            target = trees[0].points[new_index]
            while True:
                status_b, index_b = _extend(trees[1], target, step, collides)
                if status_b != _ADVANCED:
                    break
            if status_b == _REACHED:
                path_a = trees[0].path_to(new_index)
                path_b = trees[1].path_to(index_b)
                if not from_start[0]:
                    path_a, path_b = path_b, path_a
                return path_a + path_b[::-1][1:]
        trees.reverse()
        from_start.reverse()

    raise NoPath(f"Trees did not connect after {config.max_samples} samples")


def _planar_test(obstacles: Sequence[Polygon2D]) -> SegmentTest:
    def collides(a: np.ndarray, b: np.ndarray) -> bool:
        p = Point2D(float(a[0]), float(a[1]))
        q = Point2D(float(b[0]), float(b[1]))
        return segment_collides(p, q, obstacles)

    return collides


def _box_test(obstacles: Sequence[Sbbox], e: float) -> SegmentTest:
    lo, hi = box_arrays(obstacles, e)

    def collides(a: np.ndarray, b: np.ndarray) -> bool:
        return segment_hits_boxes(a, b, lo, hi)

    return collides


def _to_path2d(points: list[np.ndarray], env2d: Environment2D) -> Path2D:
    nodes = [Point2D(float(p[0]), float(p[1])) for p in points]
    nodes[0], nodes[-1] = env2d.start, env2d.end
    return Path2D(nodes=tuple(nodes), key_nodes=tuple(range(1, len(nodes) - 1)))


def rrt_2d(env2d: Environment2D, config: BaselineConfig) -> Path2D:
    """
    Goal-biased RRT without post-processing.

    Raises:
        StartOrGoalBlocked: Start or goal inside an inflated obstacle
        NoPath: Goal not reached within max_samples
    """
    obstacles = _inflated_polygons(env2d, config.clearance_e)
    _check_endpoints_2d(env2d, obstacles)
    points = _rrt(
        np.asarray(env2d.start, dtype=float),
        np.asarray(env2d.end, dtype=float),
        np.asarray(env2d.bounds_min, dtype=float),
        np.asarray(env2d.bounds_max, dtype=float),
        _planar_test(obstacles),
        config,
    )
    return _to_path2d(points, env2d)


def rrt_connect_2d(env2d: Environment2D, config: BaselineConfig) -> Path2D:
    """
    Bidirectional RRT with greedy connection.

    Raises:
        StartOrGoalBlocked: Start or goal inside an inflated obstacle
        NoPath: Trees not joined within max_samples
    """
    obstacles = _inflated_polygons(env2d, config.clearance_e)
    _check_endpoints_2d(env2d, obstacles)
    points = _rrt_connect(
        np.asarray(env2d.start, dtype=float),
        np.asarray(env2d.end, dtype=float),
        np.asarray(env2d.bounds_min, dtype=float),
        np.asarray(env2d.bounds_max, dtype=float),
        _planar_test(obstacles),
        config,
    )
    return _to_path2d(points, env2d)


def rrt_3d(env: Environment, config: BaselineConfig) -> Path3D:
    """
    Goal-biased RRT in the workspace box, with exact segment-box tests.

    Goal biasing stands in for steering the search toward the target
    plane; outputs are labelled rrt3d-goalbias.

    Raises:
        StartOrGoalBlocked: Start or goal inside an inflated box
        NoPath: Goal not reached within max_samples
    """
    validate_environment(env, config.clearance_e)
    points = _rrt(
        np.asarray(env.start, dtype=float),
        np.asarray(env.end, dtype=float),
        np.asarray(env.bounds_min, dtype=float),
        np.asarray(env.bounds_max, dtype=float),
        _box_test(env.obstacles, config.clearance_e),
        config,
    )
    nodes = [Point3D(*(float(c) for c in p)) for p in points]
    nodes[0], nodes[-1] = env.start, env.end
    return Path3D(
        nodes=tuple(nodes), algorithm=Algorithm.RRT3D.label, key_node_count=len(nodes) - 2
    )


# Lowest point heuristic


def _segment_rect_distance(
    a: Point2D, b: Point2D, x_min: float, x_max: float, y_min: float, y_max: float
) -> float:
    """Distance between segment ab and a filled rectangle (coordinates are x, y)."""
    rect = (
        Point2D(x_min, y_min),
        Point2D(x_max, y_min),
        Point2D(x_max, y_max),
        Point2D(x_min, y_max),
    )
    poly = Polygon2D(rect)
    if segment_collides(a, b, [poly]) or any(
        x_min <= p.x <= x_max and y_min <= p.z <= y_max for p in (a, b)
    ):
        return 0.0
    edges = poly.edges()
    return min(
        min(point_to_segment_distance(p, c, d) for c, d in edges for p in (a, b)),
        min(point_to_segment_distance(v, a, b) for v in rect),
    )


def corridor_obstacles(env: Environment, half_width: float) -> list[Sbbox]:
    """Boxes whose x-y footprint comes within half_width of the start-goal line."""
    a = Point2D(env.start.x, env.start.y)
    b = Point2D(env.end.x, env.end.y)
    return [
        box
        for box in env.obstacles
        if _segment_rect_distance(
            a, b, box.min_corner.x, box.max_corner.x, box.min_corner.y, box.max_corner.y
        )
        <= half_width
    ]


def lps_3d(env: Environment, config: BaselineConfig) -> Path3D:
    """
    Descend to a safe height, travel level, ascend to the goal.

    The safe height is the lowest bottom among corridor boxes minus
    clearance_e; the corridor is the start-goal line in x-y dilated by
    max(end_effector_radius, clearance_e). The level leg runs at
    min(safe height, start z), so no descent happens when the start is
    already low enough.

    Raises:
        StartOrGoalBlocked: Start or goal inside an inflated box
        CorridorBlocked: Travel height below the floor
    """
    e = config.clearance_e
    validate_environment(env, e)
    corridor = corridor_obstacles(env, max(config.end_effector_radius, e))
    h = min((box.min_corner.z for box in corridor), default=math.inf) - e
    travel = min(h, env.start.z)
    if travel < env.bounds_min.z:
        raise CorridorBlocked(
            f"Safe height {travel:.3f} mm lies below the floor {env.bounds_min.z} mm"
        )

    waypoints = [
        env.start,
        Point3D(env.start.x, env.start.y, travel),
        Point3D(env.end.x, env.end.y, travel),
        env.end,
    ]
    nodes: list[Point3D] = []
    for p in waypoints:
        if not nodes or p != nodes[-1]:
            nodes.append(p)
    if len(nodes) == 1:
        nodes.append(env.end)

    if not polyline_clear_of_boxes(nodes, env.obstacles, e):
        raise CorridorBlocked("Level leg intersects an obstacle outside the corridor")
    return Path3D(nodes=tuple(nodes), algorithm=Algorithm.LPS.label, key_node_count=len(nodes) - 2)
