"""
Unit tests for the plane-sweep 3D planner and continuous harvesting.
"""
from collections.abc import Iterable
from dataclasses import replace

import numpy as np
import pytest

from src.core.exceptions import NoFeasiblePlane, StartOrGoalBlocked
from src.models.enums import ScenarioPreset
from src.models.environment import Environment, Sbbox
from src.models.geometry import Point3D
from src.schemas.config import RunConfig, SweepConfig
from src.services.environment import generate_from_preset
from src.services.geometry import build_plane, chart_points, sweep_angles
from src.services.planner3d import (
    plan_3d,
    plan_harvest_run,
    plan_on_plane,
    project_obstacles_on_plane,
    section_obstacles_on_plane,
    slab_vertices,
    smooth_and_measure,
)
from tests.oracles import brute_force_hull, penetrates_boxes


def _sweep(delta_theta: float = 30.0, workers: int = 1) -> SweepConfig:
    return SweepConfig(delta_theta=delta_theta, workers=workers)


class TestProjection:
    """Test box projection onto swept planes."""

    def test_box_on_vertical_plane_is_rectangle(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 0.0)
        (poly,) = project_obstacles_on_plane(plane, box_env.obstacles)
        assert len(poly.vertices) == 4
        assert poly.obstacle_id == "f01"
        assert (poly.x_min, poly.x_max) == pytest.approx((80.0, 120.0))
        assert (poly.z_min, poly.z_max) == pytest.approx((-20.0, 20.0))

    def test_box_on_oblique_plane_matches_brute_force(self, box_env: Environment) -> None:
        """A box seen on a 45 degree plane projects to at most six hull vertices."""
        plane = build_plane(box_env.start, box_env.end, 45.0)
        (poly,) = project_obstacles_on_plane(plane, box_env.obstacles)
        charted = chart_points(plane, np.array(box_env.obstacles[0].corners(), dtype=float))
        assert len(poly.vertices) <= 6
        assert set(map(tuple, poly.vertices)) == brute_force_hull(charted)

    def test_no_obstacles(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 0.0)
        assert project_obstacles_on_plane(plane, ()) == []


COLUMN = Sbbox(
    Point3D(180, 240, 100), Point3D(220, 280, 500), stem_extended=True, fruit_id="f02"
)


def _rounded(vertices: Iterable[tuple[float, float]]) -> set[tuple[float, float]]:
    return {(round(float(u), 6), round(float(v), 6)) for u, v in vertices}


class TestCrossSection:
    """Test slicing boxes with a slab around the swept plane."""

    def test_box_through_vertical_plane_is_rectangle(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 0.0)
        (poly,) = section_obstacles_on_plane(plane, box_env.obstacles, 0.0)
        assert poly.obstacle_id == "f01"
        assert _rounded(poly.vertices) == {(80, -20), (80, 20), (120, -20), (120, 20)}

    def test_column_beside_the_plane_is_dropped(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 0.0)
        column = COLUMN.inflated(5.0)
        assert section_obstacles_on_plane(plane, [column], 0.0) == []
        assert len(slab_vertices(plane, column, 0.0)) == 0
        (shadow,) = project_obstacles_on_plane(plane, [column])
        assert (shadow.x_min, shadow.x_max) == pytest.approx((175.0, 225.0))

    def test_slab_reaching_the_column_keeps_it(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 0.0)
        (poly,) = section_obstacles_on_plane(plane, [COLUMN.inflated(5.0)], 100.0)
        assert poly.obstacle_id == "f02"

    def test_wide_slab_equals_projection(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 45.0)
        (section,) = section_obstacles_on_plane(plane, box_env.obstacles, 1000.0)
        (projection,) = project_obstacles_on_plane(plane, box_env.obstacles)
        assert _rounded(section.vertices) == _rounded(projection.vertices)

    def test_oblique_section_lies_on_plane_inside_box(self, box_env: Environment) -> None:
        plane = build_plane(box_env.start, box_env.end, 45.0)
        box = box_env.obstacles[0]
        points = slab_vertices(plane, box, 0.0)
        assert len(points) >= 3
        for p in points:
            assert abs(plane.signed_distance(Point3D(*p))) < 1e-6
            assert np.all(p >= np.asarray(box.min_corner) - 1e-9)
            assert np.all(p <= np.asarray(box.max_corner) + 1e-9)


class TestPlanOnPlane:
    """Test planning on a single swept plane."""

    def test_under_passing_path(self, box_env: Environment) -> None:
        """The zero-angle plane passes under the box 5 mm below its inflated bottom."""
        candidate = plan_on_plane(box_env, 0.0, _sweep())
        assert candidate.feasible
        expected = [(0, 150, 250), (75, 150, 220), (125, 150, 220), (200, 150, 250)]
        assert len(candidate.lifted_path) == 4
        for node, want in zip(candidate.lifted_path, expected):
            assert tuple(node) == pytest.approx(want, abs=1e-9)
        assert candidate.lifted_path[0] == box_env.start
        assert not penetrates_boxes(candidate.lifted_path, box_env.obstacles, 5.0)

    def test_nodes_lie_on_plane(self, box_env: Environment) -> None:
        for theta in sweep_angles(15.0):
            candidate = plan_on_plane(box_env, theta, _sweep(15.0))
            if candidate.feasible:
                for p in candidate.lifted_path:
                    assert abs(candidate.plane.signed_distance(p)) < 1e-6

    def test_smoothing_attaches_metrics(self, box_env: Environment) -> None:
        candidate = smooth_and_measure(plan_on_plane(box_env, 0.0, _sweep()), box_env, _sweep())
        assert candidate.metrics is not None
        assert candidate.metrics.length >= 200.0
        if candidate.smoothing_valid:
            assert candidate.smoothed[0] == pytest.approx(box_env.start)
            assert not penetrates_boxes(candidate.smoothed, box_env.obstacles, 5.0)

    def test_rejected_candidate_passes_through(self, box_env: Environment) -> None:
        low = replace(box_env, bounds_min=Point3D(0.0, 0.0, 240.0))
        candidate = plan_on_plane(low, 0.0, _sweep())
        assert not candidate.feasible
        assert candidate.failure_reason == "OutOfBounds"
        assert smooth_and_measure(candidate, low, _sweep()) is candidate

    def test_column_off_the_plane_does_not_block_goal(self, empty_env: Environment) -> None:
        """The column's shadow covers the goal, its cross-section does not exist."""
        env = replace(empty_env, obstacles=(COLUMN,))
        shadowed = plan_on_plane(env, 0.0, SweepConfig(delta_theta=30.0, slab_half_width=None))
        assert not shadowed.feasible
        assert shadowed.failure_reason == "StartOrGoalBlocked"

        candidate = plan_on_plane(env, 0.0, _sweep())
        assert candidate.feasible
        assert candidate.lifted_path == (env.start, env.end)


class TestPlan3D:
    """Test the plane sweep end to end."""

    def test_best_candidate_has_lowest_score(self, box_env: Environment) -> None:
        path, candidates = plan_3d(box_env, _sweep())
        assert len(candidates) == 6
        scores = [c.metrics.score for c in candidates if c.feasible and c.metrics]
        assert path.metrics is not None
        assert path.metrics.score == min(scores)
        assert path.plane_theta_deg in sweep_angles(30.0)
        assert path.algorithm == "ilmsa3d"
        assert path.nodes[0] == box_env.start and path.nodes[-1] == box_env.end
        assert not penetrates_boxes(path.nodes, box_env.obstacles, 5.0)
        assert not penetrates_boxes(path.executed, box_env.obstacles, 5.0)

    def test_five_degree_sweep_has_36_candidates(self, box_env: Environment) -> None:
        _, candidates = plan_3d(box_env, SweepConfig())
        assert len(candidates) == 36
        assert [c.theta for c in candidates] == sweep_angles(5.0)

    def test_result_independent_of_workers(self, generated_env: Environment) -> None:
        serial, _ = plan_3d(generated_env, _sweep(15.0, workers=1))
        threaded, _ = plan_3d(generated_env, _sweep(15.0, workers=4))
        assert serial == threaded

    def test_free_workspace_gives_straight_line(self, empty_env: Environment) -> None:
        path, _ = plan_3d(empty_env, _sweep())
        assert path.nodes == (empty_env.start, empty_env.end)
        assert path.plane_theta_deg == 0.0
        assert path.key_node_count == 0

    def test_blocked_start(self, box_env: Environment) -> None:
        env = replace(box_env, start=Point3D(100.0, 150.0, 250.0))
        with pytest.raises(StartOrGoalBlocked):
            plan_3d(env, _sweep())

    def test_wall_blocks_every_plane(self, box_env: Environment) -> None:
        """A wall spanning the whole cross-section leaves no feasible plane."""
        wall = Sbbox(Point3D(90, 0, 1), Point3D(110, 300, 500), fruit_id="wall")
        env = replace(box_env, obstacles=(wall,))
        with pytest.raises(NoFeasiblePlane, match="All 6 planes failed"):
            plan_3d(env, _sweep())

    def test_generated_scenarios_are_planned_safely(self) -> None:
        """Endpoints clear of every inflated box are never blocked on any plane."""
        config = RunConfig.layered({"sweep": {"delta_theta": 15.0}}).sweep
        planned = 0
        for seed in range(5):
            env = generate_from_preset(ScenarioPreset.ENVIRONMENT_2, seed=seed)
            try:
                path, candidates = plan_3d(env, config)
            except NoFeasiblePlane:
                continue
            planned += 1
            for c in candidates:
                assert c.failure_reason != "StartOrGoalBlocked"
                if c.feasible:
                    assert not penetrates_boxes(c.lifted_path, env.obstacles, 5.0)
            assert not penetrates_boxes(path.executed, env.obstacles, 5.0)
        assert planned >= 4


class TestHarvestRun:
    """Test bottom-to-top continuous harvesting."""

    def test_legs_follow_picking_order(self, generated_env: Environment) -> None:
        run = plan_harvest_run(generated_env, _sweep())
        assert len(run.legs) == len(generated_env.targets)
        goals_z = [leg.goal.z for leg in run.legs]
        assert goals_z == sorted(goals_z)
        assert run.picked == sum(1 for leg in run.legs if leg.success)

        position = generated_env.start
        for leg in run.legs:
            assert leg.start == position
            if leg.success:
                assert leg.path is not None and leg.path.nodes[-1] == leg.goal
                position = leg.goal
            else:
                assert leg.failure_reason

    def test_no_targets(self, box_env: Environment) -> None:
        run = plan_harvest_run(box_env, _sweep())
        assert run.legs == () and run.picked == 0 and run.total_length == 0

