"""
Domain value types for the ILMSA planner.
"""
from src.models.enums import (
    Algorithm,
    Alternative,
    Metric,
    PlotKind,
    ScenarioPreset,
    StatTest,
    TieBreak,
)
from src.models.environment import Environment, Environment2D, Sbbox, Target
from src.models.geometry import Plane, Point2D, Point3D, Polygon2D, Segment2D, Segment3D
from src.models.path import (
    HarvestLeg,
    HarvestRun,
    Path2D,
    Path3D,
    PathMetrics,
    PlaneCandidate,
)
from src.models.trial import StatResult, TrialRecord

__all__ = [
    "Algorithm",
    "Alternative",
    "Metric",
    "PlotKind",
    "ScenarioPreset",
    "StatTest",
    "TieBreak",
    "Environment",
    "Environment2D",
    "Sbbox",
    "Target",
    "Plane",
    "Point2D",
    "Point3D",
    "Polygon2D",
    "Segment2D",
    "Segment3D",
    "HarvestLeg",
    "HarvestRun",
    "Path2D",
    "Path3D",
    "PathMetrics",
    "PlaneCandidate",
    "StatResult",
    "TrialRecord",
]
