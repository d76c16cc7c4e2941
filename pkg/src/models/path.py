"""
Planner outputs: paths, metrics, plane candidates and harvest runs.
"""
from dataclasses import dataclass
from typing import Optional

from src.models.geometry import Plane, Point2D, Point3D


@dataclass(frozen=True, slots=True)
class PathMetrics:
    """Quality metrics of one path; score is relative to a candidate set."""

    length: float
    min_clearance: float
    smoothness: float
    score: Optional[float] = None


@dataclass(frozen=True, slots=True)
class Path2D:
    """
    Planar polyline.

    key_nodes holds the indices of nodes inserted to avoid obstacles.
    """

    nodes: tuple[Point2D, ...]
    key_nodes: tuple[int, ...] = ()
    iterations_used: int = 0


@dataclass(frozen=True, slots=True)
class Path3D:
    nodes: tuple[Point3D, ...]
    algorithm: str
    key_node_count: int = 0
    smoothed: tuple[Point3D, ...] = ()
    plane_theta_deg: Optional[float] = None
    metrics: Optional[PathMetrics] = None

    @property
    def executed(self) -> tuple[Point3D, ...]:
        """The curve the arm would follow: smoothed samples when present."""
        return self.smoothed if self.smoothed else self.nodes


@dataclass(frozen=True, slots=True)
class PlaneCandidate:
    """Result of planning on one swept plane."""

    plane: Plane
    raw_path: Optional[Path2D]
    lifted_path: tuple[Point3D, ...]
    feasible: bool
    failure_reason: Optional[str] = None
    smoothed: tuple[Point3D, ...] = ()
    smoothing_valid: bool = False
    metrics: Optional[PathMetrics] = None

    @property
    def theta(self) -> float:
        return self.plane.theta


@dataclass(frozen=True, slots=True)
class HarvestLeg:
    """One leg of a continuous harvesting run."""

    fruit_id: str
    start: Point3D
    goal: Point3D
    path: Optional[Path3D]
    failure_reason: Optional[str] = None
    planning_time_ms: float = 0.0

    @property
    def success(self) -> bool:
        return self.path is not None


@dataclass(frozen=True, slots=True)
class HarvestRun:
    legs: tuple[HarvestLeg, ...]

    @property
    def picked(self) -> int:
        return sum(1 for leg in self.legs if leg.success)

    @property
    def total_length(self) -> float:
        return sum(
            leg.path.metrics.length
            for leg in self.legs
            if leg.path is not None and leg.path.metrics is not None
        )

    @property
    def total_planning_time_ms(self) -> float:
        return sum(leg.planning_time_ms for leg in self.legs)
