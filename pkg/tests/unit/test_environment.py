"""
Unit tests for environment loading, validation, transformation and
seeded scenario generation.
"""
import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from src.core.exceptions import (
    InvalidExtension,
    InvariantViolation,
    IoError,
    PlacementFailure,
    SchemaViolation,
    StartOrGoalBlocked,
)
from src.models.enums import ScenarioPreset
from src.models.environment import Environment, Environment2D, Sbbox, Target
from src.models.geometry import Point2D, Point3D, Polygon2D
from src.services.environment import (
    extend_stem,
    generate_from_preset,
    generate_scenario,
    harvest_sequence,
    load_any_environment,
    load_environment,
    load_environment_2d,
    project_to_xoz,
    save_environment,
    validate_environment,
    validate_environment_2d,
)


def _write(path: Path, payload: object) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


class TestValidation:
    """Test environment invariants."""

    def test_valid_environment_passes(self, box_env: Environment) -> None:
        assert validate_environment(box_env) is box_env

    def test_start_out_of_bounds(self, box_env: Environment) -> None:
        env = replace(box_env, start=Point3D(-1.0, 150.0, 250.0))
        with pytest.raises(InvariantViolation, match="outside the bounds"):
            validate_environment(env)

    def test_start_inside_inflated_box(self, box_env: Environment) -> None:
        """Blocked start names the obstacle."""
        env = replace(box_env, start=Point3D(77.0, 150.0, 250.0))
        with pytest.raises(StartOrGoalBlocked) as exc_info:
            validate_environment(env, e=5.0)
        assert exc_info.value.obstacle_id == "f01"
        assert exc_info.value.exit_code == 3

    def test_stem_extension_must_reach_top(self, box_env: Environment) -> None:
        box = replace(box_env.obstacles[0], stem_extended=True)
        with pytest.raises(InvariantViolation, match="stem-extended"):
            validate_environment(replace(box_env, obstacles=(box,)))

    def test_box_corners_must_be_ordered(self) -> None:
        with pytest.raises(InvariantViolation, match="not below"):
            Sbbox(Point3D(0, 0, 10), Point3D(10, 10, 5), fruit_id="bad")

    def test_bounds_must_be_ordered(self) -> None:
        with pytest.raises(InvariantViolation):
            Environment(Point3D(0, 0, 0), Point3D(0, 10, 10), Point3D(0, 0, 0), Point3D(0, 1, 1))

    def test_clockwise_polygon_rejected(self, square_env_2d: Environment2D) -> None:
        cw = Polygon2D(tuple(reversed(square_env_2d.obstacles[0].vertices)), obstacle_id="cw")
        with pytest.raises(InvariantViolation, match="counter-clockwise"):
            validate_environment_2d(replace(square_env_2d, obstacles=(cw,)))

    def test_planar_start_blocked(self, square_env_2d: Environment2D) -> None:
        env = replace(square_env_2d, start=Point2D(37.0, 50.0))
        with pytest.raises(StartOrGoalBlocked) as exc_info:
            validate_environment_2d(env, e=5.0)
        assert exc_info.value.obstacle_id == "sq"


class TestFiles:
    """Test environment persistence."""

    def test_round_trip_is_exact(self, tmp_path: Path, box_env: Environment) -> None:
        """Floats survive a save and load bit for bit."""
        env = replace(box_env, start=Point3D(0.1 + 0.2, 150.0, 250.0))
        save_environment(env, tmp_path / "env.json")
        loaded = load_environment(tmp_path / "env.json")
        assert loaded == env
        assert loaded.start.x == 0.1 + 0.2

    def test_planar_round_trip(self, tmp_path: Path, square_env_2d: Environment2D) -> None:
        save_environment(square_env_2d, tmp_path / "env2d.json")
        assert load_environment_2d(tmp_path / "env2d.json") == square_env_2d
        assert load_any_environment(tmp_path / "env2d.json") == square_env_2d

    def test_targets_and_fruit_size_persist(
        self, tmp_path: Path, generated_env: Environment
    ) -> None:
        save_environment(generated_env, tmp_path / "gen.json")
        loaded = load_any_environment(tmp_path / "gen.json")
        assert loaded == generated_env

    def test_invalid_json(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(SchemaViolation, match="invalid JSON"):
            load_environment(path)

    def test_missing_field_reports_path(self, tmp_path: Path) -> None:
        path = _write(
            tmp_path / "env.json",
            {"bounds": {"min": [0, 0, 0], "max": [1, 1, 1]}, "end": [1, 1, 1]},
        )
        with pytest.raises(SchemaViolation) as exc_info:
            load_environment(path)
        assert exc_info.value.field_path == "start"

    def test_wrong_vector_length_reports_path(self, tmp_path: Path) -> None:
        path = _write(
            tmp_path / "env.json",
            {
                "bounds": {"min": [0, 0, 0], "max": [100, 100, 100]},
                "start": [0, 0, 0],
                "end": [100, 100, 100],
                "obstacles": [{"id": "a", "min": [1, 1], "max": [2, 2, 2]}],
            },
        )
        with pytest.raises(SchemaViolation) as exc_info:
            load_environment(path)
        assert exc_info.value.field_path == "obstacles.0.min"

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(IoError) as exc_info:
            load_environment(tmp_path / "absent.json")
        assert exc_info.value.exit_code == 4


class TestTransformations:
    """Test stem extension, projection and picking order."""

    def test_extend_stem(self) -> None:
        box = Sbbox(Point3D(0, 0, 10), Point3D(10, 10, 20), fruit_id="a")
        tall = extend_stem(box, 100.0)
        assert tall.max_corner == Point3D(10, 10, 100.0)
        assert tall.stem_extended
        assert tall.min_corner == box.min_corner

    def test_extend_below_top_raises(self) -> None:
        box = Sbbox(Point3D(0, 0, 10), Point3D(10, 10, 20), fruit_id="a")
        with pytest.raises(InvalidExtension):
            extend_stem(box, 15.0)

    def test_project_to_xoz(self, box_env: Environment) -> None:
        flat = project_to_xoz(box_env)
        assert flat.start == Point2D(0.0, 250.0)
        assert flat.end == Point2D(200.0, 250.0)
        rect = flat.obstacles[0]
        assert (rect.x_min, rect.x_max, rect.z_min, rect.z_max) == (80, 120, 230, 270)
        assert rect.obstacle_id == "f01"

    def test_harvest_sequence_bottom_to_top(self) -> None:
        targets = [
            Target("c", Point3D(5, 0, 30)),
            Target("a", Point3D(9, 0, 10)),
            Target("b", Point3D(1, 0, 30)),
        ]
        assert [t.fruit_id for t in harvest_sequence(targets)] == ["a", "b", "c"]


class TestGeneration:
    """Test seeded scenario generation."""

    def test_same_seed_same_scenario(self) -> None:
        a = generate_from_preset(ScenarioPreset.ENVIRONMENT_2, seed=5)
        b = generate_from_preset(ScenarioPreset.ENVIRONMENT_2, seed=5)
        assert a == b

    def test_different_seeds_differ(self) -> None:
        a = generate_from_preset(ScenarioPreset.ENVIRONMENT_2, seed=5)
        b = generate_from_preset(ScenarioPreset.ENVIRONMENT_2, seed=6)
        assert a.obstacles != b.obstacles

    def test_generated_layout_invariants(self) -> None:
        """Stems reach the top, inflated boxes are disjoint, endpoints are free."""
        e = 5.0
        env = generate_from_preset(ScenarioPreset.ENVIRONMENT_2, seed=9, e=e)
        assert len(env.obstacles) == 13
        assert [t.fruit_id for t in env.targets] == [b.fruit_id for b in env.obstacles]
        for box in env.obstacles:
            assert box.stem_extended
            assert box.max_corner.z == env.bounds_max.z
            assert not box.inflated(e).contains(env.start, strict=False)
            assert not box.inflated(e).contains(env.end, strict=False)
        grown = [b.inflated(e) for b in env.obstacles]
        for i, a in enumerate(grown):
            for b in grown[i + 1 :]:
                lo = np.maximum(a.min_corner, b.min_corner)
                hi = np.minimum(a.max_corner, b.max_corner)
                assert np.any(lo > hi)

    def test_targets_sit_inside_their_fruit(self, generated_env: Environment) -> None:
        for box, target in zip(generated_env.obstacles, generated_env.targets):
            assert box.contains(target.center)

    def test_no_fruits(self) -> None:
        env = generate_from_preset(ScenarioPreset.ENVIRONMENT_1, seed=1, n_fruits=0)
        assert env.obstacles == () and env.targets == ()

    def test_overcrowded_workspace_fails(self) -> None:
        with pytest.raises(PlacementFailure, match="Could not place"):
            generate_scenario(
                seed=1,
                n_fruits=10,
                bounds_min=Point3D(0, 0, 0),
                bounds_max=Point3D(100, 100, 100),
                start=Point3D(0, 0, 0),
                end=Point3D(100, 100, 0),
            )

    def test_oversized_fruit_fails(self) -> None:
        with pytest.raises(PlacementFailure, match="does not fit"):
            generate_scenario(
                seed=1,
                n_fruits=1,
                bounds_min=Point3D(0, 0, 0),
                bounds_max=Point3D(30, 30, 30),
                start=Point3D(0, 0, 0),
                end=Point3D(30, 30, 0),
            )

    def test_xoz_clear_keeps_projection_plannable(self) -> None:
        env = generate_from_preset(ScenarioPreset.ENVIRONMENT_1, seed=4, xoz_clear=True)
        validate_environment_2d(project_to_xoz(env), e=5.0)
