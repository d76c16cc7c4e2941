"""
Configuration schemas for planners, the plane sweep, smoothing, scoring
and the baselines. RunConfig is what a `--config` JSON file holds.
"""
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.core.config import settings
from src.core.exceptions import ConfigError
from src.models.enums import TieBreak
from src.schemas.common import first_error


class PlannerConfig(BaseModel):
    """Settings of the planar local minima search."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    safe_distance_e: float = Field(
        5.0,
        gt=0,
        allow_inf_nan=False,
        description="Offset of inserted nodes below obstacle vertices, and obstacle inflation (mm)",
    )
    max_iter: int = Field(50, ge=1, description="Iteration budget")
    tie_break: TieBreak = Field(
        TieBreak.SMALLER_X_THEN_Z,
        description="Rule between equally distant candidate vertices",
    )


class EvaluationWeights(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    w_length: float = Field(0.4, ge=0, allow_inf_nan=False)
    w_safety: float = Field(0.4, ge=0, allow_inf_nan=False)
    w_smoothness: float = Field(0.2, ge=0, allow_inf_nan=False)

    @model_validator(mode="after")
    def positive_total(self) -> "EvaluationWeights":
        if self.w_length + self.w_safety + self.w_smoothness <= 0:
            raise ValueError("weights must not all be zero")
        return self


class SplineConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    degree: int = Field(3, ge=1, description="B-spline degree")
    samples_per_segment: int = Field(20, ge=2, description="Samples per knot span")
    clamped: bool = Field(True, description="Repeat end knots degree+1 times")


class SweepConfig(BaseModel):
    """Plane sweep settings; nests everything one 3D plan needs."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta_theta: float = Field(
        5.0, gt=0, le=90, allow_inf_nan=False, description="Sweep step (deg)"
    )
    planner: PlannerConfig = Field(default_factory=PlannerConfig)
    weights: EvaluationWeights = Field(default_factory=EvaluationWeights)
    spline: SplineConfig = Field(default_factory=SplineConfig)
    workers: int = Field(
        default_factory=lambda: settings.SWEEP_WORKERS,
        ge=1,
        description="Threads evaluating planes; results are identical for any value",
    )
    slab_half_width: Optional[float] = Field(
        0.0,
        ge=0,
        allow_inf_nan=False,
        description=(
            "Only the part of each inflated box within this distance of the plane is "
            "projected (mm); 0 keeps the exact cross-section, null projects whole boxes"
        ),
    )


class BaselineConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    grid_resolution: float = Field(5.0, gt=0, allow_inf_nan=False, description="A* cell size (mm)")
    step_size: float = Field(10.0, gt=0, allow_inf_nan=False, description="RRT extension (mm)")
    goal_bias: float = Field(0.05, ge=0, le=1, description="Probability of sampling the goal")
    max_samples: int = Field(10000, ge=1)
    rng_seed: int = Field(0, description="Seed of the sampling planners")
    clearance_e: float = Field(
        5.0, ge=0, allow_inf_nan=False, description="Obstacle inflation (mm)"
    )
    end_effector_radius: float = Field(
        20.0, ge=0, allow_inf_nan=False, description="LPS corridor half-width (mm)"
    )


class OutputPaths(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    path: Optional[str] = None
    svg: Optional[str] = None
    results: Optional[str] = None


class RunConfig(BaseModel):
    """
    Everything configurable for one CLI run.

    Defaults: e = 5 mm, delta_theta = 5 deg, weights 0.4/0.4/0.2, cubic splines.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    sweep: SweepConfig = Field(default_factory=SweepConfig)
    baseline: BaselineConfig = Field(default_factory=BaselineConfig)
    outputs: OutputPaths = Field(default_factory=OutputPaths)

    @property
    def planner(self) -> PlannerConfig:
        return self.sweep.planner

    @classmethod
    def layered(cls, *layers: Optional[dict[str, Any]]) -> "RunConfig":
        """
        Merge configuration layers, later ones winning, and validate once.

        Raises:
            ConfigError: If the merged configuration is invalid
        """
        merged: dict[str, Any] = {}
        for layer in layers:
            if layer:
                merged = deep_merge(merged, layer)
        try:
            return cls.model_validate(merged)
        except ValidationError as exc:
            field, message = first_error(exc)
            raise ConfigError(message, field_path=field) from exc


def deep_merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Recursively merge two dictionaries without mutating either."""
    result = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(result.get(key), dict):
            result[key] = deep_merge(result[key], value)
        else:
            result[key] = value
    return result
