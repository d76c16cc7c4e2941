"""
Subcommand handlers for the `ilmsa` command.

Every handler takes the parsed arguments and returns an exit code. Inputs
are loaded and validated before any output file is written.
"""
import argparse
import json
import sys
import time
from typing import Any, Optional, Union

from pydantic import ValidationError

from src.core.exceptions import ConfigError, NoPathError, SchemaViolation
from src.core.logging import get_logger, run_logger
from src.models.enums import Algorithm, Alternative, Metric, PlotKind, StatTest
from src.models.environment import Environment, Environment2D
from src.models.path import HarvestRun, Path2D, Path3D
from src.models.trial import StatResult
from src.schemas.common import first_error
from src.schemas.config import RunConfig
from src.schemas.path import PathFile, PathMetricsSchema
from src.schemas.suite import GeneratedScenario
from src.services import bench, plotting, stats
from src.services.environment import (
    load_any_environment,
    load_environment,
    project_to_xoz,
    save_environment,
)
from src.services.evaluation import densified_node_count
from src.services.planner3d import plan_harvest_run
from src.utils.files import atomic_write_bytes, atomic_write_text, dump_json, read_text

logger = get_logger(__name__)


# Configuration


def _flag_layer(args: argparse.Namespace) -> dict[str, Any]:
    """RunConfig overrides from command-line flags that were given."""
    layer: dict[str, Any] = {}

    def put(path: tuple[str, ...], value: Any) -> None:
        node = layer
        for key in path[:-1]:
            node = node.setdefault(key, {})
        node[path[-1]] = value

    if getattr(args, "safe_distance", None) is not None:
        put(("sweep", "planner", "safe_distance_e"), args.safe_distance)
        put(("baseline", "clearance_e"), args.safe_distance)
    if getattr(args, "delta_theta", None) is not None:
        put(("sweep", "delta_theta"), args.delta_theta)
    if getattr(args, "max_iter", None) is not None:
        put(("sweep", "planner", "max_iter"), args.max_iter)
    if getattr(args, "workers", None) is not None:
        put(("sweep", "workers"), args.workers)
    if getattr(args, "seed", None) is not None and args.command == "plan":
        put(("baseline", "rng_seed"), args.seed)
    return layer


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Defaults, then the --config file, then flags.

    Raises:
        ConfigError: Invalid merged configuration or malformed config file
        IoError: Config file unreadable
    """
    file_layer: Optional[dict[str, Any]] = None
    if getattr(args, "config", None):
        try:
            file_layer = json.loads(read_text(args.config))
        except SchemaViolation as exc:
            raise ConfigError(exc.message) from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
        if not isinstance(file_layer, dict):
            raise ConfigError("top level must be an object")
    return RunConfig.layered(file_layer, _flag_layer(args))


def _emit(payload: Any, out: Optional[str]) -> None:
    text = dump_json(payload)
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


# gen-env / project


def cmd_gen_env(args: argparse.Namespace) -> int:
    try:
        request = GeneratedScenario(
            preset=args.preset,
            seed=args.seed,
            n_fruits=args.fruits,
            bounds=args.bounds,
            start=args.start,
            end=args.end,
            fruit_size=args.fruit_size,
            xoz_clear=args.xoz_clear,
        )
    except ValidationError as exc:
        field, message = first_error(exc)
        raise ConfigError(message, field_path=field) from exc
    env = bench.generate_entry(request, args.safe_distance)
    save_environment(env, args.out)
    logger.info(f"Wrote environment with {len(env.obstacles)} obstacle(s) to {args.out}")
    return 0


def cmd_project(args: argparse.Namespace) -> int:
    env = load_environment(args.env, args.safe_distance)
    save_environment(project_to_xoz(env), args.out)
    return 0


# plan


def _path_file(
    env: Union[Environment, Environment2D],
    path: Union[Path2D, Path3D],
    algorithm: Algorithm,
    planning_time_ms: float,
) -> PathFile:
    outcome = bench.measure_outcome(env, path)
    metrics = PathMetricsSchema(
        length_mm=outcome.length,
        clearance_mm=outcome.clearance,
        smoothness_rad=outcome.smoothness,
        score=outcome.score,
        planning_time_ms=planning_time_ms,
        node_count=densified_node_count(outcome.executed),
        key_node_count=outcome.key_node_count,
    )
    if isinstance(path, Path3D):
        return PathFile.from_nodes(
            algorithm=path.algorithm,
            nodes=[list(p) for p in path.nodes],
            smoothed=[list(p) for p in path.smoothed],
            plane_theta_deg=path.plane_theta_deg,
            metrics=metrics,
        )
    return PathFile.from_nodes(
        algorithm=algorithm.value, nodes=[list(p) for p in path.nodes], metrics=metrics
    )


def cmd_plan(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    algorithm = Algorithm(args.algo)
    env = load_any_environment(args.env, config.planner.safe_distance_e)
    if isinstance(env, Environment2D) and not algorithm.is_planar:
        raise ConfigError(
            f"'{algorithm.value}' needs a 3D environment; {args.env} is planar", field_path="algo"
        )

    started = time.perf_counter()
    if isinstance(env, Environment2D):
        path: Union[Path2D, Path3D] = bench.execute_planar(env, algorithm, config)
    else:
        path = bench.execute_planner(env, algorithm, config)
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    result = _path_file(env, path, algorithm, elapsed_ms)
    run_logger.log_plan_completed(
        result.algorithm, elapsed_ms, len(result.nodes), result.plane_theta_deg
    )
    svg = args.svg or config.outputs.svg
    figure: Optional[bytes] = None
    if svg:
        plot_env = env
        if isinstance(env, Environment) and isinstance(path, Path2D):
            plot_env = project_to_xoz(env)
        figure = plotting.render_path(
            plot_env, result.nodes, config.planner.safe_distance_e, smoothed=result.smoothed
        )

    if figure is not None:
        atomic_write_bytes(svg, figure)
    _emit(result.model_dump(mode="json"), args.out or config.outputs.path)
    return 0


# harvest


def _harvest_payload(run: HarvestRun) -> dict[str, Any]:
    return {
        "picked": run.picked,
        "legs_total": len(run.legs),
        "total_length_mm": run.total_length,
        "total_planning_time_ms": run.total_planning_time_ms,
        "legs": [
            {
                "fruit_id": leg.fruit_id,
                "success": leg.success,
                "start": list(leg.start),
                "goal": list(leg.goal),
                "failure_reason": leg.failure_reason,
                "planning_time_ms": leg.planning_time_ms,
                "plane_theta_deg": leg.path.plane_theta_deg if leg.path else None,
                "length_mm": leg.path.metrics.length if leg.path and leg.path.metrics else None,
                "nodes": [list(p) for p in leg.path.nodes] if leg.path else [],
            }
            for leg in run.legs
        ],
    }


def cmd_harvest(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    env = load_environment(args.env, config.planner.safe_distance_e)
    run = plan_harvest_run(env, config.sweep)
    if run.legs and run.picked == 0:
        reasons = "; ".join(f"{leg.fruit_id}: {leg.failure_reason}" for leg in run.legs)
        raise NoPathError(f"No fruit of {len(run.legs)} could be reached ({reasons})")
    _emit(_harvest_payload(run), args.out or config.outputs.path)
    return 0


# bench / stats / plot


def _algorithms(text: str) -> list[Algorithm]:
    names = [name.strip() for name in text.split(",") if name.strip()]
    try:
        return [Algorithm(name) for name in names]
    except ValueError as exc:
        raise ConfigError(str(exc), field_path="algos") from exc


def cmd_bench(args: argparse.Namespace) -> int:
    config = load_run_config(args)
    algorithms = _algorithms(args.algos)
    out = args.out or config.outputs.results
    if not out:
        raise ConfigError("no output path; pass --out", field_path="outputs.results")
    scenarios = bench.load_suite(args.suite, config.planner.safe_distance_e)
    records = bench.run_trials(scenarios, algorithms, args.trials, args.seed, config)
    bench.export_csv(records, out)
    return 0


def _groups(text: Optional[str]) -> Optional[list[str]]:
    if not text:
        return None
    return [g.strip() for g in text.split(",") if g.strip()]


def cmd_stats(args: argparse.Namespace) -> int:
    records = bench.parse_csv(args.results)
    test = StatTest(args.test)
    metric = Metric(args.metric)

    if test is StatTest.SUMMARY:
        sys.stdout.write(dump_json(bench.summarize(records)))
        return 0

    result: StatResult
    if test is StatTest.SPEARMAN:
        wanted = _groups(args.groups)
        selected = [r for r in records if wanted is None or r.algorithm in wanted]
        pairs = [
            (float(r.obstacle_count), float(getattr(r, metric.column)))
            for r in selected
            if r.success and getattr(r, metric.column) is not None
        ]
        result = stats.spearman_rho(
            [p[0] for p in pairs], [p[1] for p in pairs], labels=("obstacle_count", metric.value)
        )
    else:
        groups = bench.metric_groups(records, metric, _groups(args.groups))
        labels = list(groups)
        if test is StatTest.MANN_WHITNEY:
            if len(labels) != 2:
                raise ConfigError(
                    f"mann-whitney compares exactly 2 groups, got {len(labels)}",
                    field_path="groups",
                )
            result = stats.mann_whitney_u(
                groups[labels[0]],
                groups[labels[1]],
                alternative=Alternative(args.alternative),
                labels=(labels[0], labels[1]),
            )
        else:
            result = stats.kruskal_wallis(list(groups.values()), labels=labels)

    sys.stdout.write(dump_json({"metric": metric.value, **result.to_dict()}))
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    records = bench.parse_csv(args.results)
    if PlotKind(args.kind) is PlotKind.SWEEP:
        plotting.emit_sweep_plot(records, args.out, algorithm=args.algo)
    else:
        plotting.emit_svg_plot(records, Metric(args.metric), args.out, _groups(args.groups))
    return 0
