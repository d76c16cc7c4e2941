"""
Entry point of the `ilmsa` command.

Exit codes: 0 success, 1 unexpected failure, 2 invalid input or usage,
3 no path, 4 file system error.
"""
import argparse
import sys
from collections.abc import Callable, Sequence
from typing import Optional

from src.cli import commands
from src.core.config import settings
from src.core.exceptions import PlannerError, StartOrGoalBlocked
from src.core.logging import get_logger, run_logger, setup_logging
from src.models.enums import Algorithm, Alternative, Metric, PlotKind, ScenarioPreset, StatTest

logger = get_logger(__name__)


def _floats(count: int) -> Callable[[str], list[float]]:
    """argparse type for a comma-separated list of exactly count numbers."""

    def parse(text: str) -> list[float]:
        try:
            values = [float(part) for part in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"expected {count} comma-separated numbers: {text!r}"
            ) from None
        if len(values) != count:
            raise argparse.ArgumentTypeError(f"expected {count} values, got {len(values)}")
        return values

    return parse


def _choices(enum: type) -> list[str]:
    return [member.value for member in enum]  # type: ignore[attr-defined]


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="RunConfig JSON file; flags override it")
    parser.add_argument(
        "--safe-distance", type=float, help="Safe distance e in mm (config default 5)"
    )
    parser.add_argument(
        "--delta-theta", type=float, help="Plane sweep step in degrees (config default 5)"
    )
    parser.add_argument("--max-iter", type=int, help="ILMSA iteration budget (config default 50)")
    parser.add_argument(
        "--workers", type=int, help="Threads for the plane sweep (default ILMSA_SWEEP_WORKERS)"
    )


def build_parser() -> argparse.ArgumentParser:
    formatter = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(
        prog="ilmsa",
        description="Local minima search path planner and benchmark harness.",
        formatter_class=formatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-env", help="Generate a seeded scenario", formatter_class=formatter)
    gen.add_argument("--seed", type=int, default=1, help="Placement seed")
    gen.add_argument("--fruits", type=int, help="Number of fruits (preset default otherwise)")
    gen.add_argument("--bounds", type=_floats(6), help="XMIN,XMAX,YMIN,YMAX,ZMIN,ZMAX")
    gen.add_argument("--start", type=_floats(3), help="X,Y,Z")
    gen.add_argument("--end", type=_floats(3), help="X,Y,Z")
    gen.add_argument("--fruit-size", type=_floats(3), help="Fruit box size X,Y,Z in mm")
    gen.add_argument("--preset", choices=_choices(ScenarioPreset), help="Named layout")
    gen.add_argument("--safe-distance", type=float, default=5.0, help="Inflation in mm")
    gen.add_argument(
        "--xoz-clear", action="store_true", help="Keep endpoints clear in the x-z projection too"
    )
    gen.add_argument("--out", required=True, help="Environment JSON to write")
    gen.set_defaults(handler=commands.cmd_gen_env)

    plan = sub.add_parser("plan", help="Plan one path", formatter_class=formatter)
    plan.add_argument("--env", required=True, help="Environment JSON (2D or 3D)")
    plan.add_argument(
        "--algo", choices=_choices(Algorithm), default=Algorithm.ILMSA3D.value, help="Planner"
    )
    plan.add_argument("--seed", type=int, help="Seed of the sampling planners (config default 0)")
    plan.add_argument("--out", help="Path JSON to write; stdout when omitted")
    plan.add_argument("--svg", help="Also draw the path to this SVG file")
    _add_config_flags(plan)
    plan.set_defaults(handler=commands.cmd_plan)

    project = sub.add_parser(
        "project", help="Project a 3D environment onto xoz", formatter_class=formatter
    )
    project.add_argument("--env", required=True, help="3D environment JSON")
    project.add_argument("--out", required=True, help="2D environment JSON to write")
    project.add_argument("--safe-distance", type=float, default=5.0, help="Inflation in mm")
    project.set_defaults(handler=commands.cmd_project)

    harvest = sub.add_parser(
        "harvest", help="Pick every target bottom to top", formatter_class=formatter
    )
    harvest.add_argument("--env", required=True, help="3D environment JSON with targets")
    harvest.add_argument("--out", help="Run summary JSON; stdout when omitted")
    _add_config_flags(harvest)
    harvest.set_defaults(handler=commands.cmd_harvest)

    bench = sub.add_parser("bench", help="Run a benchmark suite", formatter_class=formatter)
    bench.add_argument("--suite", required=True, help="Suite JSON")
    bench.add_argument(
        "--algos", default=Algorithm.ILMSA3D.value, help="Comma-separated planner list"
    )
    bench.add_argument("--trials", type=int, default=50, help="Trials per scenario and planner")
    bench.add_argument("--seed", type=int, default=0, help="Base seed; trial t uses seed + t")
    bench.add_argument("--out", help="Results CSV to write")
    _add_config_flags(bench)
    bench.set_defaults(handler=commands.cmd_bench)

    stats = sub.add_parser("stats", help="Test a results CSV", formatter_class=formatter)
    stats.add_argument("--results", required=True, help="Results CSV")
    stats.add_argument(
        "--metric", choices=_choices(Metric), default=Metric.LENGTH.value, help="Metric"
    )
    stats.add_argument(
        "--test", choices=_choices(StatTest), default=StatTest.MANN_WHITNEY.value, help="Test"
    )
    stats.add_argument("--groups", help="Comma-separated algorithms to compare")
    stats.add_argument(
        "--alternative",
        choices=_choices(Alternative),
        default=Alternative.TWO_SIDED.value,
        help="Alternative hypothesis for mann-whitney",
    )
    stats.set_defaults(handler=commands.cmd_stats)

    plot = sub.add_parser("plot", help="Draw a results CSV", formatter_class=formatter)
    plot.add_argument("--results", required=True, help="Results CSV")
    plot.add_argument(
        "--metric", choices=_choices(Metric), default=Metric.LENGTH.value, help="Bar metric"
    )
    plot.add_argument(
        "--kind", choices=_choices(PlotKind), default=PlotKind.BARS.value, help="Figure"
    )
    plot.add_argument("--groups", help="Comma-separated algorithms for bars")
    plot.add_argument("--algo", help="Algorithm to keep for the sweep figure")
    plot.add_argument("--out", required=True, help="SVG to write")
    plot.set_defaults(handler=commands.cmd_plot)

    return parser


def describe(error: PlannerError) -> str:
    """One-line diagnostic for stderr."""
    text = f"{type(error).__name__}: {error.message}"
    if isinstance(error, StartOrGoalBlocked) and error.obstacle_id:
        text += f" [obstacle {error.obstacle_id}]"
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    setup_logging(settings.LOG_LEVEL, settings.LOG_JSON)
    try:
        return int(args.handler(args))
    except PlannerError as exc:
        print(f"error: {describe(exc)}", file=sys.stderr)
        run_logger.log_error(args.command, exc, exc.exit_code)
        return exc.exit_code
    except Exception as exc:
        logger.exception(f"{args.command} failed unexpectedly")
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
