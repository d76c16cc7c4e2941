"""
Benchmark harness: suite loading, trial execution, CSV persistence and
per-group summaries.

Trials run in (scenario, algorithm, trial) order with seed = base_seed +
trial. A planner failure becomes a success=false row and never stops the
suite. Planning time covers the plan call only.
"""
import csv
import io
import json
import time
from collections.abc import Sequence
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Optional, Union, get_args, get_origin

import numpy as np
from pydantic import ValidationError

from src.core.exceptions import ConfigError, EmptyInput, PlannerError, SchemaViolation
from src.core.logging import get_logger, run_logger
from src.models.enums import Algorithm, Metric
from src.models.environment import Environment, Environment2D
from src.models.geometry import Point3D
from src.models.path import Path2D, Path3D
from src.models.trial import TrialRecord
from src.schemas.common import first_error
from src.schemas.config import RunConfig
from src.schemas.suite import GeneratedScenario, SuiteFile
from src.services.baselines import astar_2d, lps_3d, rrt_2d, rrt_3d, rrt_connect_2d
from src.services.environment import (
    DEFAULT_FRUIT_SIZE,
    PRESETS,
    generate_from_preset,
    generate_scenario,
    load_environment,
    project_to_xoz,
)
from src.services.evaluation import densified_node_count, measure_path
from src.services.ilmsa_planner import plan_environment_2d
from src.services.planner3d import plan_3d
from src.utils.files import atomic_write_text, read_text

logger = get_logger(__name__)


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    env: Environment

    @property
    def obstacle_count(self) -> int:
        return len(self.env.obstacles)


@dataclass(frozen=True)
class PlanOutcome:
    """A successful plan reduced to what a trial row needs."""

    executed: tuple[tuple[float, ...], ...]
    key_node_count: int
    length: float
    clearance: float
    smoothness: float
    score: Optional[float] = None


# Suites


def generate_entry(request: GeneratedScenario, e: float) -> Environment:
    """Environment for a suite entry's generator arguments."""
    if request.preset is not None:
        preset = PRESETS[request.preset]
        bounds_min, bounds_max = preset.bounds_min, preset.bounds_max
        start, end, n_fruits = preset.start, preset.end, preset.n_fruits
    if request.bounds is not None:
        b = request.bounds
        bounds_min, bounds_max = Point3D(b[0], b[2], b[4]), Point3D(b[1], b[3], b[5])
    if request.start is not None:
        start = Point3D(*request.start)
    if request.end is not None:
        end = Point3D(*request.end)
    if request.n_fruits is not None:
        n_fruits = request.n_fruits
    return generate_scenario(
        seed=request.seed,
        n_fruits=n_fruits,
        bounds_min=bounds_min,
        bounds_max=bounds_max,
        start=start,
        end=end,
        fruit_size=Point3D(*request.fruit_size) if request.fruit_size else DEFAULT_FRUIT_SIZE,
        e=e,
        xoz_clear=request.xoz_clear,
    )


def load_suite(path: str | Path, e: float = 5.0) -> list[Scenario]:
    """
    Read a suite file and build its scenarios.

    env_file entries resolve relative to the suite file. An obstacle sweep
    adds one scenario per count, with ids sweep-02, sweep-04 and so on.

    Raises:
        SchemaViolation: Malformed suite or environment file
        IoError: A file cannot be read
    """
    text = read_text(path)
    try:
        suite = SuiteFile.model_validate(json.loads(text))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    except ValidationError as exc:
        field, message = first_error(exc)
        raise SchemaViolation(message, field_path=field) from exc

    base = Path(path).parent
    scenarios: list[Scenario] = []
    for entry in suite.scenarios:
        if entry.env_file is not None:
            env = load_environment(base / entry.env_file, e)
        else:
            assert entry.generate is not None
            env = generate_entry(entry.generate, e)
        scenarios.append(Scenario(entry.id, env))

    if suite.obstacle_sweep is not None:
        sweep = suite.obstacle_sweep
        for count in sweep.counts:
            env = generate_from_preset(sweep.preset, seed=sweep.seed, n_fruits=count, e=e)
            scenarios.append(Scenario(f"sweep-{count:02d}", env))

    logger.info(f"Loaded suite {path} with {len(scenarios)} scenario(s)")
    return scenarios


# Trials


def execute_planar(
    env2d: Environment2D, algorithm: Algorithm, config: RunConfig
) -> Path2D:
    if algorithm is Algorithm.ILMSA2D:
        return plan_environment_2d(env2d, config.planner)
    if algorithm is Algorithm.ASTAR:
        return astar_2d(env2d, config.baseline)
    if algorithm is Algorithm.RRT:
        return rrt_2d(env2d, config.baseline)
    if algorithm is Algorithm.RRT_CONNECT:
        return rrt_connect_2d(env2d, config.baseline)
    raise ConfigError(f"'{algorithm.value}' does not plan on planar workspaces", field_path="algo")


def execute_planner(
    env: Environment, algorithm: Algorithm, config: RunConfig
) -> Union[Path2D, Path3D]:
    """Run one planner; planar planners see the xoz projection."""
    if algorithm is Algorithm.ILMSA3D:
        path, _ = plan_3d(env, config.sweep)
        return path
    if algorithm is Algorithm.RRT3D:
        return rrt_3d(env, config.baseline)
    if algorithm is Algorithm.LPS:
        return lps_3d(env, config.baseline)
    return execute_planar(project_to_xoz(env), algorithm, config)


def measure_outcome(
    env: Union[Environment, Environment2D], path: Union[Path2D, Path3D]
) -> PlanOutcome:
    """
    Metrics of a planned path against the raw obstacles.

    Planar paths in a 3D workspace are measured against the projected
    rectangles. Plane-sweep paths already carry metrics of their executed
    curve.
    """
    if isinstance(path, Path2D):
        planar = env if isinstance(env, Environment2D) else project_to_xoz(env)
        metrics = measure_path(path.nodes, planar.obstacles)
        return PlanOutcome(
            executed=tuple(path.nodes),
            key_node_count=len(path.key_nodes),
            length=metrics.length,
            clearance=metrics.min_clearance,
            smoothness=metrics.smoothness,
        )
    measured = path.metrics or measure_path(path.nodes, env.obstacles)  # type: ignore[arg-type]
    return PlanOutcome(
        executed=tuple(path.executed),
        key_node_count=path.key_node_count,
        length=measured.length,
        clearance=measured.min_clearance,
        smoothness=measured.smoothness,
        score=measured.score,
    )


def run_trial(
    scenario: Scenario, algorithm: Algorithm, trial_index: int, seed: int, config: RunConfig
) -> TrialRecord:
    trial_config = config.model_copy(
        update={"baseline": config.baseline.model_copy(update={"rng_seed": seed})}
    )
    started = time.perf_counter()
    try:
        path: Optional[Union[Path2D, Path3D]] = execute_planner(
            scenario.env, algorithm, trial_config
        )
        failure = None
    except PlannerError as exc:
        path, failure = None, exc
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    outcome = measure_outcome(scenario.env, path) if path is not None else None

    if outcome is None:
        logger.debug(
            f"{scenario.scenario_id}/{algorithm.value}/{trial_index} failed: {failure!r}"
        )
        record = TrialRecord(
            scenario_id=scenario.scenario_id,
            seed=seed,
            algorithm=algorithm.value,
            trial_index=trial_index,
            success=False,
            node_count=None,
            key_node_count=None,
            planning_time_ms=elapsed_ms,
            length_mm=None,
            clearance_mm=None,
            smoothness_rad=None,
            score=None,
            obstacle_count=scenario.obstacle_count,
        )
    else:
        record = TrialRecord(
            scenario_id=scenario.scenario_id,
            seed=seed,
            algorithm=algorithm.value,
            trial_index=trial_index,
            success=True,
            node_count=densified_node_count(outcome.executed),
            key_node_count=outcome.key_node_count,
            planning_time_ms=elapsed_ms,
            length_mm=outcome.length,
            clearance_mm=outcome.clearance,
            smoothness_rad=outcome.smoothness,
            score=outcome.score,
            obstacle_count=scenario.obstacle_count,
        )
    run_logger.log_trial_recorded(
        scenario.scenario_id, algorithm.value, trial_index, record.success, elapsed_ms
    )
    return record


def run_trials(
    scenarios: Sequence[Scenario],
    algorithms: Sequence[Algorithm],
    n_trials: int,
    base_seed: int,
    config: Optional[RunConfig] = None,
) -> list[TrialRecord]:
    """
    Run every (scenario, algorithm, trial) combination.

    Args:
        scenarios: Workspaces to plan in
        algorithms: Planners to compare
        n_trials: Trials per (scenario, algorithm)
        base_seed: Trial t uses seed base_seed + t
        config: Planner settings; defaults when omitted

    Returns:
        Records in scenario, algorithm, trial order
    """
    if n_trials < 1:
        raise EmptyInput(f"n_trials must be at least 1, got {n_trials}")
    config = config or RunConfig()
    records = [
        run_trial(scenario, algorithm, trial, base_seed + trial, config)
        for scenario in scenarios
        for algorithm in algorithms
        for trial in range(n_trials)
    ]
    logger.info(
        f"Ran {len(records)} trial(s): {sum(r.success for r in records)} succeeded"
    )
    return records


# CSV


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _field_type(annotation: Any) -> type:
    if get_origin(annotation) is Union:
        return next(a for a in get_args(annotation) if a is not type(None))
    return annotation


_COLUMN_TYPES = {f.name: _field_type(f.type) for f in fields(TrialRecord)}


def _parse_cell(column: str, raw: str) -> Any:
    kind = _COLUMN_TYPES[column]
    if raw == "":
        return None
    if kind is bool:
        if raw not in ("true", "false"):
            raise ValueError(f"expected true or false, got {raw!r}")
        return raw == "true"
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    return raw


def records_to_csv(records: Sequence[TrialRecord]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    columns = TrialRecord.column_names()
    writer.writerow(columns)
    for record in records:
        writer.writerow(_format_cell(getattr(record, c)) for c in columns)
    return buffer.getvalue()


def export_csv(records: Sequence[TrialRecord], path: str | Path) -> None:
    """
    Write records as CSV: header row, one row per record, CRLF line ends.

    Raises:
        EmptyInput: No records
        IoError: Path not writable
    """
    if not records:
        raise EmptyInput("No trial records to export")
    atomic_write_text(path, records_to_csv(records))


def parse_csv(path: str | Path) -> list[TrialRecord]:
    """
    Read records written by export_csv.

    Raises:
        IoError: File cannot be read
        SchemaViolation: Header or a cell does not match the record layout
        EmptyInput: No data rows
    """
    reader = csv.reader(io.StringIO(read_text(path), newline=""))
    header = next(reader, None)
    columns = TrialRecord.column_names()
    if header != columns:
        raise SchemaViolation(f"unexpected header {header}", field_path="header")

    records: list[TrialRecord] = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(columns):
            raise SchemaViolation(
                f"expected {len(columns)} cells, got {len(row)}", field_path=f"line {line_no}"
            )
        values: dict[str, Any] = {}
        for column, raw in zip(columns, row):
            try:
                values[column] = _parse_cell(column, raw)
            except ValueError as exc:
                raise SchemaViolation(str(exc), field_path=f"line {line_no}.{column}") from exc
        try:
            records.append(TrialRecord(**values))
        except (TypeError, PlannerError) as exc:
            raise SchemaViolation(str(exc), field_path=f"line {line_no}") from exc

    if not records:
        raise EmptyInput(f"{path} holds no trial records")
    return records


# Aggregation


def metric_values(records: Sequence[TrialRecord], metric: Metric) -> list[float]:
    """Values of a metric over the successful records that carry it."""
    values = []
    for r in records:
        value = getattr(r, metric.column)
        if r.success and value is not None:
            values.append(float(value))
    return values


def metric_groups(
    records: Sequence[TrialRecord], metric: Metric, groups: Optional[Sequence[str]] = None
) -> dict[str, list[float]]:
    """
    Metric values per algorithm, in the order given or first seen.

    Raises:
        EmptyInput: A requested algorithm has no records
    """
    labels = list(groups) if groups else list(dict.fromkeys(r.algorithm for r in records))
    result: dict[str, list[float]] = {}
    for label in labels:
        members = [r for r in records if r.algorithm == label]
        if not members:
            raise EmptyInput(f"No records for algorithm '{label}'")
        result[label] = metric_values(members, metric)
    return result


def _mean_std(values: list[float]) -> tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=float)
    std = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return float(arr.mean()), std


def summarize(records: Sequence[TrialRecord]) -> list[dict[str, Any]]:
    """
    Per (scenario, algorithm): trial count, success rate in percent, and
    mean and sample standard deviation of nodes, time and length over the
    successful trials.

    Raises:
        EmptyInput: No records
    """
    if not records:
        raise EmptyInput("No trial records to summarize")
    keys = list(dict.fromkeys((r.scenario_id, r.algorithm) for r in records))
    rows = []
    for scenario_id, algorithm in keys:
        members = [r for r in records if r.scenario_id == scenario_id and r.algorithm == algorithm]
        row: dict[str, Any] = {
            "scenario_id": scenario_id,
            "algorithm": algorithm,
            "n": len(members),
            "success_rate_pct": 100.0 * sum(r.success for r in members) / len(members),
        }
        for metric in (Metric.NODES, Metric.TIME, Metric.LENGTH):
            mean, std = _mean_std(metric_values(members, metric))
            row[f"{metric.column}_mean"] = mean
            row[f"{metric.column}_std"] = std
        rows.append(row)
    return rows


def sweep_series(
    records: Sequence[TrialRecord], metric: Metric
) -> tuple[list[int], list[float]]:
    """
    Mean of a metric per obstacle count over successful records.

    Returns:
        (ascending obstacle counts, means)
    """
    by_count: dict[int, list[float]] = {}
    for r in records:
        value = getattr(r, metric.column)
        if r.success and value is not None:
            by_count.setdefault(r.obstacle_count, []).append(float(value))
    counts = sorted(by_count)
    return counts, [float(np.mean(by_count[c])) for c in counts]
