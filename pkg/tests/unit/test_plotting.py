"""
Unit tests for SVG output.
"""
from pathlib import Path

import pytest

from src.core.exceptions import EmptyInput
from src.models.enums import Metric
from src.models.environment import Environment, Environment2D
from src.models.trial import TrialRecord
from src.services.plotting import emit_svg_plot, emit_sweep_plot, plot_path, render_path


def _records() -> list[TrialRecord]:
    records = []
    for algorithm, base in (("ilmsa3d", 250.0), ("lps", 300.0)):
        for count in (2, 4):
            for trial in range(3):
                records.append(
                    TrialRecord(
                        scenario_id=f"sweep-{count:02d}",
                        seed=trial,
                        algorithm=algorithm,
                        trial_index=trial,
                        success=True,
                        node_count=int(base) + count,
                        key_node_count=count,
                        planning_time_ms=1.0 + trial,
                        length_mm=base + 10 * count + trial,
                        clearance_mm=5.0,
                        smoothness_rad=0.5,
                        score=None,
                        obstacle_count=count,
                    )
                )
    return records


class TestResultPlots:
    """Test benchmark figures."""

    def test_bar_chart_is_byte_stable(self, tmp_path: Path) -> None:
        first, second = tmp_path / "a.svg", tmp_path / "b.svg"
        emit_svg_plot(_records(), Metric.LENGTH, first)
        emit_svg_plot(_records(), Metric.LENGTH, second)
        data = first.read_bytes()
        assert data == second.read_bytes()
        assert b"<svg" in data
        assert b"path length (mm)" in data
        assert b"ilmsa3d" in data and b"lps" in data

    def test_bar_chart_group_selection(self, tmp_path: Path) -> None:
        target = tmp_path / "bars.svg"
        emit_svg_plot(_records(), Metric.TIME, target, groups=["lps"])
        data = target.read_bytes()
        assert b"planning time (ms)" in data
        assert b"ilmsa3d" not in data

    def test_bar_chart_without_successes(self, tmp_path: Path) -> None:
        failed = [
            TrialRecord("s", 0, "lps", 0, False, None, None, 1.0, None, None, None, None, 1)
        ]
        with pytest.raises(EmptyInput):
            emit_svg_plot(failed, Metric.LENGTH, tmp_path / "x.svg")
        assert not (tmp_path / "x.svg").exists()

    def test_sweep_figure(self, tmp_path: Path) -> None:
        target = tmp_path / "sweep.svg"
        emit_sweep_plot(_records(), target, algorithm="ilmsa3d")
        data = target.read_bytes()
        assert b"obstacle count" in data
        assert b"node count (1 mm spacing)" in data

    def test_sweep_unknown_algorithm(self, tmp_path: Path) -> None:
        with pytest.raises(EmptyInput):
            emit_sweep_plot(_records(), tmp_path / "sweep.svg", algorithm="rrt")


class TestPathPlots:
    def test_3d_workspace_has_two_panels(self, tmp_path: Path, box_env: Environment) -> None:
        target = tmp_path / "path.svg"
        nodes = [box_env.start, (100.0, 150.0, 220.0), box_env.end]
        plot_path(box_env, nodes, target, 5.0, smoothed=nodes)
        data = target.read_bytes()
        assert b"y (mm)" in data and b"z (mm)" in data

    def test_planar_workspace(self, tmp_path: Path, square_env_2d: Environment2D) -> None:
        target = tmp_path / "path.svg"
        plot_path(square_env_2d, [(0, 50), (40, 35), (60, 35), (100, 50)], target, 5.0)
        data = target.read_bytes()
        assert b"z (mm)" in data and b"y (mm)" not in data

    def test_render_matches_written_file(self, tmp_path: Path, box_env: Environment) -> None:
        target = tmp_path / "path.svg"
        nodes = [box_env.start, (100.0, 150.0, 220.0), box_env.end]
        data = render_path(box_env, nodes, 5.0)
        assert data.startswith(b"<?xml")
        assert list(tmp_path.iterdir()) == []
        plot_path(box_env, nodes, target, 5.0)
        assert target.read_bytes() == data
