"""
Benchmark records and statistical test results.
"""
from dataclasses import dataclass, field, fields
from typing import Any, Optional

from src.core.exceptions import InvariantViolation


@dataclass(frozen=True, slots=True)
class TrialRecord:
    """
    One planner run. Field order is the CSV column order.

    Failed trials leave every metric empty (None) except planning time.
    """

    scenario_id: str
    seed: int
    algorithm: str
    trial_index: int
    success: bool
    node_count: Optional[int]
    key_node_count: Optional[int]
    planning_time_ms: float
    length_mm: Optional[float]
    clearance_mm: Optional[float]
    smoothness_rad: Optional[float]
    score: Optional[float]
    obstacle_count: int = 0

    def __post_init__(self) -> None:
        if self.planning_time_ms < 0:
            raise InvariantViolation(f"Negative planning time: {self.planning_time_ms}")

    @classmethod
    def column_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


@dataclass(frozen=True, slots=True)
class StatResult:
    test_name: str
    statistic: float
    p_value: float
    group_labels: tuple[str, ...]
    n_per_group: tuple[int, ...]
    details: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise InvariantViolation(f"p-value {self.p_value} outside [0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return {
            "test_name": self.test_name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "group_labels": list(self.group_labels),
            "n_per_group": list(self.n_per_group),
            **self.details,
        }
