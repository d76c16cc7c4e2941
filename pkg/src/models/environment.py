"""
Workspace models: fruit bounding boxes, targets and environments.
"""
from dataclasses import dataclass, replace
from typing import Optional

from src.core.exceptions import InvariantViolation
from src.models.geometry import Point2D, Point3D, Polygon2D


@dataclass(frozen=True, slots=True)
class Sbbox:
    """Axis-aligned box around a fruit, optionally extended up over its stem."""

    min_corner: Point3D
    max_corner: Point3D
    stem_extended: bool = False
    fruit_id: str = ""

    def __post_init__(self) -> None:
        if not all(lo < hi for lo, hi in zip(self.min_corner, self.max_corner)):
            raise InvariantViolation(
                f"Obstacle '{self.fruit_id}': min corner {tuple(self.min_corner)} "
                f"is not below max corner {tuple(self.max_corner)}"
            )

    def inflated(self, e: float) -> "Sbbox":
        """Box grown by e on every side."""
        return replace(
            self,
            min_corner=Point3D(*(c - e for c in self.min_corner)),
            max_corner=Point3D(*(c + e for c in self.max_corner)),
        )

    def corners(self) -> list[Point3D]:
        lo, hi = self.min_corner, self.max_corner
        return [
            Point3D(x, y, z)
            for x in (lo.x, hi.x)
            for y in (lo.y, hi.y)
            for z in (lo.z, hi.z)
        ]

    def contains(self, p: Point3D, strict: bool = True) -> bool:
        lo, hi = self.min_corner, self.max_corner
        if strict:
            return all(a < c < b for a, c, b in zip(lo, p, hi))
        return all(a <= c <= b for a, c, b in zip(lo, p, hi))


@dataclass(frozen=True, slots=True)
class Target:
    """Fruit to harvest."""

    fruit_id: str
    center: Point3D


@dataclass(frozen=True, slots=True)
class Environment:
    """3D workspace: bounds, start and end points, obstacles and targets."""

    bounds_min: Point3D
    bounds_max: Point3D
    start: Point3D
    end: Point3D
    obstacles: tuple[Sbbox, ...] = ()
    targets: tuple[Target, ...] = ()
    fruit_size: Optional[Point3D] = None

    def __post_init__(self) -> None:
        if not all(lo < hi for lo, hi in zip(self.bounds_min, self.bounds_max)):
            raise InvariantViolation(
                f"Bounds min {tuple(self.bounds_min)} is not below max {tuple(self.bounds_max)}"
            )

    def in_bounds(self, p: Point3D, tol: float = 1e-9) -> bool:
        return all(
            lo - tol <= c <= hi + tol for lo, c, hi in zip(self.bounds_min, p, self.bounds_max)
        )


@dataclass(frozen=True, slots=True)
class Environment2D:
    """Planar analogue of Environment with polygon obstacles."""

    bounds_min: Point2D
    bounds_max: Point2D
    start: Point2D
    end: Point2D
    obstacles: tuple[Polygon2D, ...] = ()

    def __post_init__(self) -> None:
        if not all(lo < hi for lo, hi in zip(self.bounds_min, self.bounds_max)):
            raise InvariantViolation(
                f"Bounds min {tuple(self.bounds_min)} is not below max {tuple(self.bounds_max)}"
            )

    def in_bounds(self, p: Point2D, tol: float = 1e-9) -> bool:
        return all(
            lo - tol <= c <= hi + tol for lo, c, hi in zip(self.bounds_min, p, self.bounds_max)
        )
