"""
Pydantic schemas for file formats and configuration.
"""
from src.schemas.config import (
    BaselineConfig,
    EvaluationWeights,
    OutputPaths,
    PlannerConfig,
    RunConfig,
    SplineConfig,
    SweepConfig,
)
from src.schemas.environment import Environment2DFile, EnvironmentFile
from src.schemas.path import PathFile, PathMetricsSchema
from src.schemas.suite import GeneratedScenario, ObstacleSweep, ScenarioEntry, SuiteFile

__all__ = [
    "BaselineConfig",
    "EvaluationWeights",
    "OutputPaths",
    "PlannerConfig",
    "RunConfig",
    "SplineConfig",
    "SweepConfig",
    "Environment2DFile",
    "EnvironmentFile",
    "PathFile",
    "PathMetricsSchema",
    "GeneratedScenario",
    "ObstacleSweep",
    "ScenarioEntry",
    "SuiteFile",
]
