"""
Path output file schema.
"""
from typing import Literal, Optional

from pydantic import BaseModel, Field


class PathMetricsSchema(BaseModel):
    length_mm: float
    clearance_mm: float
    smoothness_rad: float
    score: Optional[float] = None
    planning_time_ms: float = Field(..., ge=0)
    node_count: int = Field(..., ge=2, description="Nodes after densifying at 1 mm")
    key_node_count: int = Field(..., ge=0)


class PathFile(BaseModel):
    """Planner result as written by `ilmsa plan`. 2D planners write (x, z) nodes."""

    version: Literal[1] = 1
    units: Literal["mm"] = "mm"
    algorithm: str
    plane_theta_deg: Optional[float] = None
    nodes: list[list[float]]
    smoothed: list[list[float]] = Field(default_factory=list)
    metrics: PathMetricsSchema

    @classmethod
    def from_nodes(
        cls,
        algorithm: str,
        nodes: list[list[float]],
        metrics: PathMetricsSchema,
        smoothed: Optional[list[list[float]]] = None,
        plane_theta_deg: Optional[float] = None,
    ) -> "PathFile":
        return cls(
            algorithm=algorithm,
            plane_theta_deg=plane_theta_deg,
            nodes=nodes,
            smoothed=smoothed or [],
            metrics=metrics,
        )
