"""
Structured logging configuration for the ILMSA planner.
Planner and benchmark events carry scenario and algorithm context.
"""
import logging
import sys
from typing import Any, Optional

from pythonjsonlogger import jsonlogger

_CONTEXT_FIELDS = (
    "scenario_id",
    "algorithm",
    "trial_index",
    "theta_deg",
    "planning_time_ms",
    "node_count",
    "exit_code",
    "event_type",
)


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """JSON formatter that adds timestamp, level, logger and planner context."""

    def add_fields(
        self,
        log_record: dict[str, Any],
        record: logging.LogRecord,
        message_dict: dict[str, Any],
    ) -> None:
        """Add custom fields to log record."""
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = self.formatTime(record, self.datefmt)
        log_record["level"] = record.levelname
        log_record["logger"] = record.name

        for name in _CONTEXT_FIELDS:
            if hasattr(record, name):
                log_record[name] = getattr(record, name)


def setup_logging(
    log_level: str = "WARNING",
    use_json: bool = False,
) -> None:
    """
    Configure logging for the CLI process.

    Records go to stderr; stdout is reserved for command results.

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        use_json: Whether to emit one JSON object per record
    """
    level = getattr(logging, log_level.upper())

    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)

    formatter: logging.Formatter
    if use_json:
        formatter = CustomJsonFormatter("%(timestamp)s %(level)s %(name)s %(message)s")
    else:
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

    handler.setFormatter(formatter)
    root_logger.addHandler(handler)
    root_logger.setLevel(level)

    logging.getLogger("matplotlib").setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the specified name.

    Args:
        name: Logger name (usually __name__)

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


class RunLogger:
    """Structured event logger for planning runs and benchmark trials."""

    def __init__(self, logger_name: str = "ilmsa.run"):
        self.logger = logging.getLogger(logger_name)

    def log_plan_completed(
        self,
        algorithm: str,
        planning_time_ms: float,
        node_count: int,
        theta_deg: Optional[float] = None,
    ) -> None:
        """
        Log a successful plan.

        Args:
            algorithm: Planner identifier
            planning_time_ms: Wall-clock time of the plan call
            node_count: Number of polyline nodes returned
            theta_deg: Selected sweep angle, for plane-sweep planners
        """
        self.logger.info(
            f"Plan completed: {algorithm}",
            extra={
                "event_type": "plan_completed",
                "algorithm": algorithm,
                "planning_time_ms": planning_time_ms,
                "node_count": node_count,
                "theta_deg": theta_deg,
            },
        )

    def log_candidate_rejected(self, theta_deg: float, reason: str) -> None:
        """Log a plane candidate that produced no usable path."""
        self.logger.debug(
            f"Plane {theta_deg:g} deg rejected: {reason}",
            extra={"event_type": "candidate_rejected", "theta_deg": theta_deg},
        )

    def log_trial_recorded(
        self,
        scenario_id: str,
        algorithm: str,
        trial_index: int,
        success: bool,
        planning_time_ms: float,
    ) -> None:
        """
        Log one benchmark trial.

        Args:
            scenario_id: Scenario the trial ran on
            algorithm: Planner identifier
            trial_index: Zero-based trial number
            success: Whether the planner returned a path
            planning_time_ms: Wall-clock time of the plan call
        """
        self.logger.info(
            f"Trial {scenario_id}/{algorithm}/{trial_index}: "
            f"{'ok' if success else 'failed'}",
            extra={
                "event_type": "trial_recorded",
                "scenario_id": scenario_id,
                "algorithm": algorithm,
                "trial_index": trial_index,
                "planning_time_ms": planning_time_ms,
            },
        )

    def log_error(self, command: str, error: Exception, exit_code: int) -> None:
        """Log a command failure together with the exit code it maps to."""
        self.logger.error(
            f"{command} failed: {error}",
            extra={"event_type": "command_failed", "exit_code": exit_code},
        )


run_logger = RunLogger()
