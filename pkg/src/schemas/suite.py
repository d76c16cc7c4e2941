"""
Benchmark suite file schema.
"""
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.models.enums import ScenarioPreset
from src.schemas.common import FiniteFloat, Vec3


class GeneratedScenario(BaseModel):
    """
    Generator arguments. A preset supplies defaults for everything but the
    seed; explicit fields override it.
    """

    model_config = ConfigDict(extra="forbid")

    preset: Optional[ScenarioPreset] = None
    seed: int = 1
    n_fruits: Optional[int] = Field(None, ge=0)
    bounds: Optional[Annotated[list[FiniteFloat], Field(min_length=6, max_length=6)]] = Field(
        None, description="xmin, xmax, ymin, ymax, zmin, zmax"
    )
    start: Optional[Vec3] = None
    end: Optional[Vec3] = None
    fruit_size: Optional[Vec3] = None
    xoz_clear: bool = Field(False, description="Keep endpoints free in the x-z projection too")

    @model_validator(mode="after")
    def preset_or_geometry(self) -> "GeneratedScenario":
        if self.preset is None and None in (self.n_fruits, self.bounds, self.start, self.end):
            raise ValueError("without a preset, n_fruits, bounds, start and end are required")
        return self


class ScenarioEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    env_file: Optional[str] = Field(None, description="Relative to the suite file")
    generate: Optional[GeneratedScenario] = None

    @model_validator(mode="after")
    def exactly_one_source(self) -> "ScenarioEntry":
        if (self.env_file is None) == (self.generate is None):
            raise ValueError("give exactly one of env_file or generate")
        return self


class ObstacleSweep(BaseModel):
    """Expands into one generated scenario per obstacle count."""

    model_config = ConfigDict(extra="forbid")

    counts: list[int] = Field(
        default_factory=lambda: list(range(2, 21, 2)), min_length=1
    )
    preset: ScenarioPreset = ScenarioPreset.ENVIRONMENT_2
    seed: int = 1

    @model_validator(mode="after")
    def non_negative_counts(self) -> "ObstacleSweep":
        if any(c < 0 for c in self.counts):
            raise ValueError("obstacle counts must be non-negative")
        return self


class SuiteFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    scenarios: list[ScenarioEntry] = Field(default_factory=list)
    obstacle_sweep: Optional[ObstacleSweep] = None

    @model_validator(mode="after")
    def not_empty(self) -> "SuiteFile":
        if not self.scenarios and self.obstacle_sweep is None:
            raise ValueError("suite declares no scenarios")
        ids = [s.id for s in self.scenarios]
        if len(ids) != len(set(ids)):
            raise ValueError("scenario ids must be unique")
        return self
