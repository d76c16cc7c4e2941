"""
Geometric value types. All coordinates are millimetres.

Points are tuples so they sort, hash and convert to numpy arrays directly.
"""
from dataclasses import dataclass, field
from typing import NamedTuple

from src.core.exceptions import DegenerateSegment, GeometryError


class Point2D(NamedTuple):
    """Point in a vertical (x, z) plane or in an in-plane (u, v) chart."""

    x: float
    z: float


class Point3D(NamedTuple):
    x: float
    y: float
    z: float


@dataclass(frozen=True, slots=True)
class Segment2D:
    start: Point2D
    end: Point2D

    def __post_init__(self) -> None:
        if self.start == self.end:
            raise DegenerateSegment(f"Zero-length segment at {tuple(self.start)}")


@dataclass(frozen=True, slots=True)
class Segment3D:
    start: Point3D
    end: Point3D

    def __post_init__(self) -> None:
        if self.start == self.end:
            raise DegenerateSegment(f"Zero-length segment at {tuple(self.start)}")


@dataclass(frozen=True, slots=True)
class Polygon2D:
    """
    Obstacle outline, counter-clockwise.

    Two-vertex polygons stand for flattened obstacles and only take part
    in edge tests.
    """

    vertices: tuple[Point2D, ...]
    obstacle_id: str = ""
    x_min: float = field(init=False, repr=False)
    x_max: float = field(init=False, repr=False)
    z_min: float = field(init=False, repr=False)
    z_max: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.vertices) < 2:
            raise GeometryError(
                f"Polygon '{self.obstacle_id}' needs at least 2 vertices, got {len(self.vertices)}"
            )
        xs = [v.x for v in self.vertices]
        zs = [v.z for v in self.vertices]
        object.__setattr__(self, "x_min", min(xs))
        object.__setattr__(self, "x_max", max(xs))
        object.__setattr__(self, "z_min", min(zs))
        object.__setattr__(self, "z_max", max(zs))

    def edges(self) -> list[tuple[Point2D, Point2D]]:
        """Closed edge list; a two-vertex polygon has a single edge."""
        n = len(self.vertices)
        if n == 2:
            return [(self.vertices[0], self.vertices[1])]
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True, slots=True)
class Plane:
    """
    Plane a*x + b*y + c*z + d = 0 with unit normal (a, b, c), plus the
    orthonormal in-plane chart (frame_origin, u_axis, v_axis).
    """

    a: float
    b: float
    c: float
    d: float
    theta: float
    frame_origin: Point3D
    u_axis: Point3D
    v_axis: Point3D

    @property
    def normal(self) -> Point3D:
        return Point3D(self.a, self.b, self.c)

    def signed_distance(self, p: Point3D) -> float:
        return self.a * p.x + self.b * p.y + self.c * p.z + self.d
