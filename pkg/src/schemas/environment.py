"""
Environment file schemas (3D and 2D).
"""
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from src.models.environment import Environment, Environment2D, Sbbox, Target
from src.models.geometry import Point2D, Point3D, Polygon2D
from src.schemas.common import Vec2, Vec3


class Bounds3DSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: Vec3
    max: Vec3


class ObstacleSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    min: Vec3
    max: Vec3
    stem_extended: bool = False


class TargetSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    center: Vec3


class EnvironmentFile(BaseModel):
    """On-disk 3D environment, version 1."""

    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    units: Literal["mm"] = "mm"
    bounds: Bounds3DSchema
    start: Vec3
    end: Vec3
    obstacles: list[ObstacleSchema] = Field(default_factory=list)
    targets: list[TargetSchema] = Field(default_factory=list)
    fruit_size: Optional[Vec3] = Field(None, description="Generator fruit body size (mm)")

    def to_domain(self) -> Environment:
        return Environment(
            bounds_min=Point3D(*self.bounds.min),
            bounds_max=Point3D(*self.bounds.max),
            start=Point3D(*self.start),
            end=Point3D(*self.end),
            obstacles=tuple(
                Sbbox(
                    min_corner=Point3D(*o.min),
                    max_corner=Point3D(*o.max),
                    stem_extended=o.stem_extended,
                    fruit_id=o.id,
                )
                for o in self.obstacles
            ),
            targets=tuple(Target(t.id, Point3D(*t.center)) for t in self.targets),
            fruit_size=Point3D(*self.fruit_size) if self.fruit_size else None,
        )

    @classmethod
    def from_domain(cls, env: Environment) -> "EnvironmentFile":
        return cls(
            bounds=Bounds3DSchema(min=list(env.bounds_min), max=list(env.bounds_max)),
            start=list(env.start),
            end=list(env.end),
            obstacles=[
                ObstacleSchema(
                    id=o.fruit_id,
                    min=list(o.min_corner),
                    max=list(o.max_corner),
                    stem_extended=o.stem_extended,
                )
                for o in env.obstacles
            ],
            targets=[TargetSchema(id=t.fruit_id, center=list(t.center)) for t in env.targets],
            fruit_size=list(env.fruit_size) if env.fruit_size else None,
        )


class Bounds2DSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    min: Vec2
    max: Vec2


class Obstacle2DSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(..., min_length=1)
    vertices: list[Vec2] = Field(..., min_length=2, description="Counter-clockwise (x, z) outline")


class Environment2DFile(BaseModel):
    """On-disk planar environment, version 1."""

    model_config = ConfigDict(extra="forbid")

    version: Literal[1] = 1
    units: Literal["mm"] = "mm"
    bounds: Bounds2DSchema
    start: Vec2
    end: Vec2
    obstacles: list[Obstacle2DSchema] = Field(default_factory=list)

    def to_domain(self) -> Environment2D:
        return Environment2D(
            bounds_min=Point2D(*self.bounds.min),
            bounds_max=Point2D(*self.bounds.max),
            start=Point2D(*self.start),
            end=Point2D(*self.end),
            obstacles=tuple(
                Polygon2D(tuple(Point2D(*v) for v in o.vertices), obstacle_id=o.id)
                for o in self.obstacles
            ),
        )

    @classmethod
    def from_domain(cls, env: Environment2D) -> "Environment2DFile":
        return cls(
            bounds=Bounds2DSchema(min=list(env.bounds_min), max=list(env.bounds_max)),
            start=list(env.start),
            end=list(env.end),
            obstacles=[
                Obstacle2DSchema(id=p.obstacle_id, vertices=[list(v) for v in p.vertices])
                for p in env.obstacles
            ],
        )
