"""
Error hierarchy for the ILMSA planner.

Every error carries the process exit code the CLI reports for it:
2 for malformed input or configuration, 3 when no path exists,
4 for file system failures.
"""
from typing import Optional


class PlannerError(Exception):
    """Base class for all planner errors."""

    exit_code: int = 2

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


# Input and configuration errors (exit 2)


class SchemaViolation(PlannerError):
    """A file does not match its JSON schema."""

    def __init__(self, message: str, field_path: str = "") -> None:
        super().__init__(f"{field_path}: {message}" if field_path else message)
        self.field_path = field_path


class InvariantViolation(PlannerError):
    """A well-formed value breaks a domain invariant."""


class ConfigError(PlannerError):
    """Configuration value outside its allowed range."""

    def __init__(self, message: str, field_path: str = "") -> None:
        super().__init__(f"{field_path}: {message}" if field_path else message)
        self.field_path = field_path


class PlacementFailure(PlannerError):
    """Scenario generation could not place every fruit."""


class InvalidExtension(PlannerError):
    """Stem extension target lies below the box top."""


class EmptyInput(PlannerError):
    """An export or plot was requested for zero records."""


# Geometry and numerics


class GeometryError(PlannerError):
    """Base class for degenerate geometric input."""


class DegenerateSegment(GeometryError):
    """Segment with coincident endpoints."""


class OffPlanePoint(GeometryError):
    """Point does not lie on the plane it is charted against."""


class DegenerateHull(GeometryError):
    """Fewer than three distinct points, or all of them collinear."""


class EmptyVertexSet(GeometryError):
    """No candidate vertex to pick a detour from."""


class TooFewControlPoints(GeometryError):
    """Spline needs more control points than its degree."""


class ParameterOutOfRange(GeometryError):
    """Spline parameter outside the valid knot range."""


class TooShort(GeometryError):
    """Path with fewer than two nodes."""


class DegenerateTurn(GeometryError):
    """Path collapses to fewer than two distinct nodes."""


# Statistics


class StatisticsError(PlannerError):
    """Base class for invalid statistical input."""


class EmptySample(StatisticsError):
    """A sample has no observations."""


class InsufficientGroups(StatisticsError):
    """Fewer than two groups were supplied."""


class EmptyCandidateSet(StatisticsError):
    """Nothing to score."""


# No-path family (exit 3)


class NoPathError(PlannerError):
    """Base class for planner failures to find a path."""

    exit_code = 3


class NoPathWithinBudget(NoPathError):
    """Iteration budget exhausted while collisions remain."""


class NoPath(NoPathError):
    """Search space exhausted without reaching the goal."""


class NoFeasiblePlane(NoPathError):
    """Every swept plane failed."""


class CorridorBlocked(NoPathError):
    """Safe travel height lies below the workspace floor."""


class OutOfBounds(NoPathError):
    """A generated node lies outside the workspace bounds."""


class StartOrGoalBlocked(InvariantViolation, NoPathError):
    """Start or goal lies inside an (inflated) obstacle."""

    exit_code = 3

    def __init__(self, message: str, obstacle_id: Optional[str] = None) -> None:
        super().__init__(message)
        self.obstacle_id = obstacle_id


# I/O (exit 4)


class IoError(PlannerError):
    """Reading or writing a file failed."""

    exit_code = 4
