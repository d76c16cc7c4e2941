"""
Contract tests for the on-disk formats: environment JSON (3D and 2D),
path JSON and results CSV.
"""
import json
from pathlib import Path

import pytest

from src.cli.main import main
from src.core.exceptions import InvariantViolation, SchemaViolation
from src.models.environment import Environment, Environment2D
from src.models.trial import TrialRecord
from src.services.bench import records_to_csv
from src.services.environment import (
    environment_to_json,
    load_any_environment,
    load_environment,
    project_to_xoz,
)

ENVIRONMENT_3D = {
    "version": 1,
    "units": "mm",
    "bounds": {"min": [0, 0, 0], "max": [300, 300, 500]},
    "start": [0, 150, 250],
    "end": [200, 150, 250],
    "obstacles": [{"id": "f01", "min": [80, 130, 230], "max": [120, 170, 270]}],
    "targets": [{"id": "f01", "center": [100, 150, 250]}],
}

ENVIRONMENT_2D = {
    "version": 1,
    "units": "mm",
    "bounds": {"min": [0, 0], "max": [100, 100]},
    "start": [0, 50],
    "end": [100, 50],
    "obstacles": [{"id": "sq", "vertices": [[40, 40], [60, 40], [60, 60], [40, 60]]}],
}

RESULTS_HEADER = (
    "scenario_id,seed,algorithm,trial_index,success,node_count,key_node_count,"
    "planning_time_ms,length_mm,clearance_mm,smoothness_rad,score,obstacle_count"
)


def _write(tmp_path: Path, name: str, payload: dict) -> Path:
    target = tmp_path / name
    target.write_text(json.dumps(payload))
    return target


class TestEnvironmentFile:
    """Test the environment document layout."""

    def test_hand_written_3d_document_loads(self, tmp_path: Path, box_env: Environment) -> None:
        env = load_any_environment(_write(tmp_path, "env.json", ENVIRONMENT_3D))
        assert isinstance(env, Environment)
        assert env.obstacles == box_env.obstacles
        assert env.targets[0].fruit_id == "f01"

    def test_hand_written_2d_document_loads(
        self, tmp_path: Path, square_env_2d: Environment2D
    ) -> None:
        env = load_any_environment(_write(tmp_path, "env2d.json", ENVIRONMENT_2D))
        assert env == square_env_2d

    def test_written_3d_keys(self, box_env: Environment) -> None:
        data = json.loads(environment_to_json(box_env))
        assert set(data) == {"version", "units", "bounds", "start", "end", "obstacles", "targets"}
        assert data["obstacles"][0] == {
            "id": "f01",
            "min": [80.0, 130.0, 230.0],
            "max": [120.0, 170.0, 270.0],
            "stem_extended": False,
        }

    def test_written_2d_keys(self, box_env: Environment) -> None:
        data = json.loads(environment_to_json(project_to_xoz(box_env)))
        assert data["bounds"] == {"min": [0.0, 0.0], "max": [300.0, 500.0]}
        assert data["start"] == [0.0, 250.0]
        (obstacle,) = data["obstacles"]
        assert obstacle["id"] == "f01"
        assert sorted(map(tuple, obstacle["vertices"])) == [
            (80.0, 230.0),
            (80.0, 270.0),
            (120.0, 230.0),
            (120.0, 270.0),
        ]

    @pytest.mark.parametrize(
        "change,field_path",
        [
            ({"version": 2}, "version"),
            ({"units": "cm"}, "units"),
            ({"start": [0, 150]}, "start"),
            ({"colour": "red"}, "colour"),
        ],
    )
    def test_rejected_documents(self, tmp_path: Path, change: dict, field_path: str) -> None:
        target = _write(tmp_path, "env.json", {**ENVIRONMENT_3D, **change})
        with pytest.raises(SchemaViolation) as exc_info:
            load_environment(target)
        assert exc_info.value.field_path == field_path

    def test_inverted_box(self, tmp_path: Path) -> None:
        bad = {**ENVIRONMENT_3D, "obstacles": [{"id": "x", "min": [9, 9, 9], "max": [1, 1, 1]}]}
        with pytest.raises(InvariantViolation):
            load_environment(_write(tmp_path, "env.json", bad))


@pytest.mark.usefixtures("restore_logging")
class TestPathFile:
    """Test the document written by `ilmsa plan`."""

    def test_3d_plan_document(self, tmp_path: Path) -> None:
        env_file = _write(tmp_path, "env.json", ENVIRONMENT_3D)
        out = tmp_path / "path.json"
        code = main(["plan", "--env", str(env_file), "--delta-theta", "30", "--out", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["version"] == 1 and data["units"] == "mm"
        assert data["algorithm"] == "ilmsa3d"
        assert data["plane_theta_deg"] in [0.0, 30.0, 60.0, 90.0, 120.0, 150.0]
        assert data["nodes"][0] == [0.0, 150.0, 250.0]
        assert data["nodes"][-1] == [200.0, 150.0, 250.0]
        assert set(data["metrics"]) == {
            "length_mm",
            "clearance_mm",
            "smoothness_rad",
            "score",
            "planning_time_ms",
            "node_count",
            "key_node_count",
        }
        assert data["metrics"]["clearance_mm"] >= 5.0 - 1e-6

    def test_2d_plan_document(self, tmp_path: Path) -> None:
        env_file = _write(tmp_path, "env2d.json", ENVIRONMENT_2D)
        out = tmp_path / "path.json"
        assert main(["plan", "--env", str(env_file), "--algo", "ilmsa2d", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["algorithm"] == "ilmsa2d"
        assert data["plane_theta_deg"] is None
        assert data["smoothed"] == []
        assert data["nodes"] == [[0.0, 50.0], [35.0, 30.0], [65.0, 30.0], [100.0, 50.0]]
        assert data["metrics"]["key_node_count"] == 2
        assert data["metrics"]["score"] is None


class TestResultsCsv:
    def test_header(self) -> None:
        assert ",".join(TrialRecord.column_names()) == RESULTS_HEADER

    def test_row_layout(self) -> None:
        record = TrialRecord("s", 3, "astar", 1, True, 120, 4, 0.5, 119.5, 5.0, 1.25, None, 2)
        lines = records_to_csv([record]).split("\r\n")
        assert lines[0] == RESULTS_HEADER
        assert lines[1] == "s,3,astar,1,true,120,4,0.5,119.5,5.0,1.25,,2"
        assert lines[2] == ""
