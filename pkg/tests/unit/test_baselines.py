"""
Unit tests for the comparison planners.
"""
import heapq
import math
from dataclasses import replace

import numpy as np
import pytest

from src.core.exceptions import CorridorBlocked, NoPath, StartOrGoalBlocked
from src.models.environment import Environment, Environment2D, Sbbox
from src.models.geometry import Point2D, Point3D
from src.schemas.config import BaselineConfig
from src.services.baselines import (
    GridAStar,
    astar_2d,
    build_occupancy_grid,
    corridor_obstacles,
    lps_3d,
    rrt_2d,
    rrt_3d,
    rrt_connect_2d,
)
from src.services.geometry import inflate_polygon, rectangle
from tests.oracles import penetrates_boxes, penetrates_convex


def _wall_env(gap: bool = True) -> Environment2D:
    if gap:
        walls = (rectangle(95, 105, 0, 80, "low"), rectangle(95, 105, 120, 200, "high"))
    else:
        walls = (rectangle(95, 105, 0, 200, "wall"),)
    return Environment2D(
        bounds_min=Point2D(0, 0),
        bounds_max=Point2D(200, 200),
        start=Point2D(20, 100),
        end=Point2D(180, 100),
        obstacles=walls,
    )


def _dijkstra_cost(blocked: np.ndarray, start: tuple, goal: tuple, resolution: float) -> float:
    cols, rows = blocked.shape
    dist = {start: 0.0}
    queue = [(0.0, start)]
    while queue:
        d, (i, j) = heapq.heappop(queue)
        if (i, j) == goal:
            return d
        if d > dist[(i, j)]:
            continue
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                n = (i + di, j + dj)
                if (di, dj) == (0, 0) or not (0 <= n[0] < cols and 0 <= n[1] < rows):
                    continue
                if blocked[n]:
                    continue
                nd = d + math.hypot(di, dj) * resolution
                if nd < dist.get(n, math.inf):
                    dist[n] = nd
                    heapq.heappush(queue, (nd, n))
    return math.inf


def _max_step(nodes) -> float:
    pts = np.asarray(nodes, dtype=float)
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).max())


class TestGridAStar:
    """Test the occupancy grid and A* search."""

    def test_grid_shape(self) -> None:
        grid = build_occupancy_grid(_wall_env(), BaselineConfig(grid_resolution=10.0))
        assert grid.shape == (20, 20)

    def test_wall_cells_blocked_gap_free(self) -> None:
        grid = build_occupancy_grid(_wall_env(), BaselineConfig())
        assert grid.blocked[grid.cell_of(Point2D(100, 40))]
        assert not grid.blocked[grid.cell_of(Point2D(100, 100))]

    def test_cost_matches_dijkstra(self) -> None:
        env = _wall_env()
        grid = build_occupancy_grid(env, BaselineConfig())
        start, goal = grid.cell_of(env.start), grid.cell_of(env.end)
        _, cost = GridAStar(grid).search(start, goal)
        assert cost == pytest.approx(_dijkstra_cost(grid.blocked, start, goal, 5.0))

    def test_path_through_gap(self) -> None:
        env = _wall_env()
        path = astar_2d(env, BaselineConfig())
        assert path.nodes[0] == env.start and path.nodes[-1] == env.end
        grown = [inflate_polygon(p, 5.0) for p in env.obstacles]
        assert not penetrates_convex(path.nodes, grown)
        assert all(80 < p.z < 120 for p in path.nodes if 90 <= p.x <= 110)

    def test_full_wall_has_no_path(self) -> None:
        with pytest.raises(NoPath):
            astar_2d(_wall_env(gap=False), BaselineConfig())

    def test_blocked_start(self, square_env_2d: Environment2D) -> None:
        env = replace(square_env_2d, start=Point2D(50, 50))
        with pytest.raises(StartOrGoalBlocked) as exc_info:
            astar_2d(env, BaselineConfig())
        assert exc_info.value.obstacle_id == "sq"


class TestSamplingPlanners:
    """Test RRT and RRT-Connect on the xoz projection."""

    @pytest.mark.parametrize("planner", [rrt_2d, rrt_connect_2d])
    def test_path_is_collision_free(self, planner, square_env_2d: Environment2D) -> None:
        config = BaselineConfig(max_samples=5000)
        path = planner(square_env_2d, config)
        assert path.nodes[0] == square_env_2d.start
        assert path.nodes[-1] == square_env_2d.end
        grown = [inflate_polygon(p, 5.0) for p in square_env_2d.obstacles]
        assert not penetrates_convex(path.nodes, grown)
        assert _max_step(path.nodes) <= config.step_size + 1e-9

    @pytest.mark.parametrize("planner", [rrt_2d, rrt_connect_2d])
    def test_same_seed_same_path(self, planner, square_env_2d: Environment2D) -> None:
        config = BaselineConfig(max_samples=5000, rng_seed=11)
        assert planner(square_env_2d, config) == planner(square_env_2d, config)

    def test_gap_found_by_rrt_connect(self) -> None:
        env = _wall_env()
        path = rrt_connect_2d(env, BaselineConfig(max_samples=5000))
        grown = [inflate_polygon(p, 5.0) for p in env.obstacles]
        assert not penetrates_convex(path.nodes, grown)

    @pytest.mark.parametrize("planner", [rrt_2d, rrt_connect_2d])
    def test_full_wall_exhausts_budget(self, planner) -> None:
        with pytest.raises(NoPath, match="after 200 samples"):
            planner(_wall_env(gap=False), BaselineConfig(max_samples=200))

    def test_blocked_goal(self, square_env_2d: Environment2D) -> None:
        env = replace(square_env_2d, end=Point2D(62, 50))
        with pytest.raises(StartOrGoalBlocked):
            rrt_2d(env, BaselineConfig())


class TestRrt3D:
    def test_box_avoided(self, box_env: Environment) -> None:
        config = BaselineConfig(max_samples=20000, goal_bias=0.1)
        path = rrt_3d(box_env, config)
        assert path.algorithm == "rrt3d-goalbias"
        assert path.nodes[0] == box_env.start and path.nodes[-1] == box_env.end
        assert path.key_node_count == len(path.nodes) - 2
        assert not penetrates_boxes(path.nodes, box_env.obstacles, 5.0)
        assert _max_step(path.nodes) <= config.step_size + 1e-9

    def test_deterministic(self, box_env: Environment) -> None:
        config = BaselineConfig(max_samples=20000, goal_bias=0.1, rng_seed=4)
        assert rrt_3d(box_env, config) == rrt_3d(box_env, config)


class TestLowestPoint:
    """Test the descend-travel-ascend heuristic."""

    def test_passes_under_box(self, box_env: Environment) -> None:
        path = lps_3d(box_env, BaselineConfig())
        assert path.algorithm == "lps"
        assert path.nodes == (
            Point3D(0, 150, 250),
            Point3D(0, 150, 225),
            Point3D(200, 150, 225),
            Point3D(200, 150, 250),
        )
        assert path.key_node_count == 2
        assert not penetrates_boxes(path.nodes, box_env.obstacles, 5.0)

    def test_no_obstacles_is_straight(self, empty_env: Environment) -> None:
        path = lps_3d(empty_env, BaselineConfig())
        assert path.nodes == (empty_env.start, empty_env.end)

    def test_low_box_blocks_corridor(self, box_env: Environment) -> None:
        low = Sbbox(Point3D(80, 130, 2), Point3D(120, 170, 270), fruit_id="low")
        with pytest.raises(CorridorBlocked, match="below the floor"):
            lps_3d(replace(box_env, obstacles=(low,)), BaselineConfig())

    def test_corridor_excludes_distant_boxes(self, box_env: Environment) -> None:
        far = Sbbox(Point3D(80, 250, 100), Point3D(120, 290, 140), fruit_id="far")
        env = replace(box_env, obstacles=(*box_env.obstacles, far))
        assert [b.fruit_id for b in corridor_obstacles(env, 20.0)] == ["f01"]
        assert lps_3d(env, BaselineConfig()).nodes[1].z == 225.0

    def test_corridor_width_follows_end_effector(self, box_env: Environment) -> None:
        side = Sbbox(Point3D(80, 170, 100), Point3D(120, 200, 140), fruit_id="side")
        env = replace(box_env, obstacles=(side,))
        assert corridor_obstacles(env, 20.0) == [side]
        assert corridor_obstacles(env, 20.0 - 1e-3) == []
        assert lps_3d(env, BaselineConfig(end_effector_radius=10.0)).nodes == (
            env.start,
            env.end,
        )
