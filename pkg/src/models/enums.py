"""
Enum definitions for planner, benchmark and statistics identifiers.
String enums so values serialize directly into JSON and CSV.
"""
from enum import Enum


class Algorithm(str, Enum):
    """Planner selectable from the CLI and the benchmark harness."""
    ILMSA2D = "ilmsa2d"
    ILMSA3D = "ilmsa3d"
    ASTAR = "astar"
    RRT = "rrt"
    RRT_CONNECT = "rrtconnect"
    RRT3D = "rrt3d"
    LPS = "lps"

    @property
    def is_planar(self) -> bool:
        """True for planners that run on the xoz projection."""
        return self in {Algorithm.ILMSA2D, Algorithm.ASTAR, Algorithm.RRT, Algorithm.RRT_CONNECT}

    @property
    def label(self) -> str:
        """Name written to path files; flags the goal-bias stand-in."""
        if self is Algorithm.RRT3D:
            return "rrt3d-goalbias"
        return self.value


class TieBreak(str, Enum):
    """Rule for choosing between equally distant detour vertices."""
    SMALLER_X_THEN_Z = "smaller-x-then-z"
    LARGER_X_THEN_Z = "larger-x-then-z"


class Alternative(str, Enum):
    """Alternative hypothesis for the rank-sum test."""
    TWO_SIDED = "two-sided"
    LESS = "less"
    GREATER = "greater"


class StatTest(str, Enum):
    """Statistics selectable from `ilmsa stats`."""
    MANN_WHITNEY = "mann-whitney"
    KRUSKAL_WALLIS = "kruskal-wallis"
    SPEARMAN = "spearman"
    SUMMARY = "summary"


class ScenarioPreset(str, Enum):
    """Named workspace layouts for scenario generation."""
    ENVIRONMENT_1 = "environment-1"
    ENVIRONMENT_2 = "environment-2"
    SHORT_DISTANCE = "short-distance"
    LONG_DISTANCE = "long-distance"
    DENSE_OBSTACLES = "dense-obstacles"


class PlotKind(str, Enum):
    """Figure layout for `ilmsa plot`."""
    BARS = "bars"
    SWEEP = "sweep"


class Metric(str, Enum):
    """Trial metric names accepted by stats and plot commands."""
    LENGTH = "length"
    TIME = "time"
    NODES = "nodes"
    KEY_NODES = "key_nodes"
    CLEARANCE = "clearance"
    SMOOTHNESS = "smoothness"
    SCORE = "score"

    @property
    def column(self) -> str:
        """TrialRecord field holding this metric."""
        return _METRIC_COLUMNS[self]

    @property
    def axis_label(self) -> str:
        return _METRIC_LABELS[self]


_METRIC_COLUMNS = {
    Metric.LENGTH: "length_mm",
    Metric.TIME: "planning_time_ms",
    Metric.NODES: "node_count",
    Metric.KEY_NODES: "key_node_count",
    Metric.CLEARANCE: "clearance_mm",
    Metric.SMOOTHNESS: "smoothness_rad",
    Metric.SCORE: "score",
}

_METRIC_LABELS = {
    Metric.LENGTH: "path length (mm)",
    Metric.TIME: "planning time (ms)",
    Metric.NODES: "node count (1 mm spacing)",
    Metric.KEY_NODES: "key nodes",
    Metric.CLEARANCE: "clearance (mm)",
    Metric.SMOOTHNESS: "smoothness (rad)",
    Metric.SCORE: "score",
}
