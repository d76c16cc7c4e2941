"""
Geometric primitives: orientation test, segment intersection, point-line
distance, swept planes with in-plane charts, convex hulls and polygon
membership.

Planar points are (x, z): x to the right, z up. All tolerances are
absolute millimetres.
"""
import math
from collections.abc import Iterable, Sequence

import numpy as np

from src.core.exceptions import DegenerateHull, DegenerateSegment, GeometryError, OffPlanePoint
from src.models.geometry import Plane, Point2D, Point3D, Polygon2D, Segment2D

ALGEBRA_TOL = 1e-9
ON_PLANE_TOL = 1e-6
_VERTICAL_TOL = 1e-9
_FRAME_TOL = 1e-12


def ccw(a: Point2D, b: Point2D, c: Point2D) -> bool:
    """True iff a, b, c turn counter-clockwise. Collinear triples are False."""
    return (c.z - a.z) * (b.x - a.x) > (b.z - a.z) * (c.x - a.x)


def points_intersect(a: Point2D, b: Point2D, c: Point2D, d: Point2D) -> bool:
    """Orientation-based intersection test of segments ab and cd."""
    return ccw(a, c, d) != ccw(b, c, d) and ccw(a, b, c) != ccw(a, b, d)


def segments_intersect(ab: Segment2D, cd: Segment2D) -> bool:
    return points_intersect(ab.start, ab.end, cd.start, cd.end)


def point_segment_line_distance(v: Point2D, s: Point2D, e: Point2D) -> float:
    """
    Perpendicular distance from v to the infinite line through s and e.

    Raises:
        DegenerateSegment: If s equals e
    """
    if s == e:
        raise DegenerateSegment(f"Line through coincident points {tuple(s)}")
    dz = e.z - s.z
    dx = e.x - s.x
    return abs(dz * v.x - dx * v.z + e.x * s.z - e.z * s.x) / math.hypot(dz, dx)


def point_to_segment_distance(p: Point2D, a: Point2D, b: Point2D) -> float:
    """Euclidean distance from p to the closed segment ab."""
    dx, dz = b.x - a.x, b.z - a.z
    length_sq = dx * dx + dz * dz
    if length_sq == 0.0:
        return math.hypot(p.x - a.x, p.z - a.z)
    t = ((p.x - a.x) * dx + (p.z - a.z) * dz) / length_sq
    t = min(1.0, max(0.0, t))
    return math.hypot(p.x - (a.x + t * dx), p.z - (a.z + t * dz))


# Planes


def rotation_matrix(axis: np.ndarray, theta_deg: float) -> np.ndarray:
    """Rotation by theta about a unit axis (Rodrigues form)."""
    ux, uy, uz = axis
    t = math.radians(theta_deg)
    c, s = math.cos(t), math.sin(t)
    c1 = 1.0 - c
    return np.array(
        [
            [c + ux * ux * c1, ux * uy * c1 - uz * s, ux * uz * c1 + uy * s],
            [uy * ux * c1 + uz * s, c + uy * uy * c1, uy * uz * c1 - ux * s],
            [uz * ux * c1 - uy * s, uz * uy * c1 + ux * s, c + uz * uz * c1],
        ]
    )


def initial_normal(axis: np.ndarray) -> np.ndarray:
    """
    Unit vector perpendicular to the axis: axis x z-hat, or axis x y-hat
    when the axis is vertical.
    """
    n0 = np.cross(axis, np.array([0.0, 0.0, 1.0]))
    if np.linalg.norm(n0) < _VERTICAL_TOL:
        n0 = np.cross(axis, np.array([0.0, 1.0, 0.0]))
    return n0 / np.linalg.norm(n0)


def _upward(v: np.ndarray) -> np.ndarray:
    """Orient v so its z component is positive, falling back to y then x."""
    for k in (2, 1, 0):
        if abs(v[k]) > _FRAME_TOL:
            return v if v[k] > 0 else -v
    return v


def build_plane(start: Point3D, end: Point3D, theta: float) -> Plane:
    """
    Plane through start and end, rotated theta degrees about the start-end
    axis from the initial normal.

    The chart origin is start, u points from start to end and v lies in the
    plane pointing upward.

    Args:
        start: First point on the plane
        end: Second point on the plane
        theta: Sweep angle in degrees; the sweep uses [0, 180) and angles
            180 apart give the same plane

    Returns:
        Plane with unit normal and orthonormal in-plane frame

    Raises:
        DegenerateSegment: If start equals end
        GeometryError: If theta is not finite
    """
    if start == end:
        raise DegenerateSegment(f"Start and end coincide at {tuple(start)}")
    if not math.isfinite(theta):
        raise GeometryError(f"Sweep angle {theta} is not finite")

    p0 = np.asarray(start, dtype=float)
    direction = np.asarray(end, dtype=float) - p0
    axis = direction / np.linalg.norm(direction)

    normal = rotation_matrix(axis, theta) @ initial_normal(axis)
    normal /= np.linalg.norm(normal)

    v_axis = np.cross(normal, axis)
    v_axis = _upward(v_axis / np.linalg.norm(v_axis))

    a, b, c = (float(k) for k in normal)
    return Plane(
        a=a,
        b=b,
        c=c,
        d=-float(normal @ p0),
        theta=float(theta),
        frame_origin=start,
        u_axis=Point3D(*(float(k) for k in axis)),
        v_axis=Point3D(*(float(k) for k in v_axis)),
    )


def sweep_angles(delta_theta: float) -> list[float]:
    """Angles k * delta_theta covering [0, 180)."""
    count = math.floor((180.0 - ALGEBRA_TOL) / delta_theta) + 1
    return [k * delta_theta for k in range(count)]


def project_point(plane: Plane, p: Point3D) -> Point3D:
    """Orthogonal projection of p onto the plane."""
    t = plane.signed_distance(p) / (plane.a**2 + plane.b**2 + plane.c**2)
    return Point3D(p.x - t * plane.a, p.y - t * plane.b, p.z - t * plane.c)


def to_plane_coords(plane: Plane, p_on_plane: Point3D) -> Point2D:
    """
    Chart coordinates (u, v) of a point on the plane.

    Raises:
        OffPlanePoint: If p is farther than 1e-6 mm from the plane
    """
    distance = plane.signed_distance(p_on_plane)
    if abs(distance) > ON_PLANE_TOL:
        raise OffPlanePoint(f"Point {tuple(p_on_plane)} is {distance:.3g} mm off the plane")
    o, u, v = plane.frame_origin, plane.u_axis, plane.v_axis
    dx, dy, dz = p_on_plane.x - o.x, p_on_plane.y - o.y, p_on_plane.z - o.z
    return Point2D(dx * u.x + dy * u.y + dz * u.z, dx * v.x + dy * v.y + dz * v.z)


def from_plane_coords(plane: Plane, q: Point2D) -> Point3D:
    o, u, v = plane.frame_origin, plane.u_axis, plane.v_axis
    return Point3D(
        o.x + q.x * u.x + q.z * v.x,
        o.y + q.x * u.y + q.z * v.y,
        o.z + q.x * u.z + q.z * v.z,
    )


def chart_points(plane: Plane, points: np.ndarray) -> np.ndarray:
    """
    Chart coordinates of the projections of many points at once.

    Projection moves points along the normal, which is orthogonal to both
    chart axes, so the chart coordinates of the projection equal the dot
    products of the raw offsets.

    Args:
        plane: Target plane
        points: (N, 3) array

    Returns:
        (N, 2) array of (u, v)
    """
    offsets = points - np.asarray(plane.frame_origin)
    basis = np.array([plane.u_axis, plane.v_axis]).T
    return offsets @ basis


# Polygons


def _cross(o: Point2D, a: Point2D, b: Point2D) -> float:
    return (a.x - o.x) * (b.z - o.z) - (a.z - o.z) * (b.x - o.x)


def convex_hull_2d(points: Iterable[Point2D], obstacle_id: str = "") -> Polygon2D:
    """
    Convex hull by Andrew's monotone chain.

    Returns:
        Counter-clockwise polygon starting at the lowest-x (then lowest-z)
        point, without collinear vertices

    Raises:
        DegenerateHull: Fewer than 3 distinct points, or all collinear
    """
    pts = sorted(set(Point2D(float(p[0]), float(p[1])) for p in points))
    if len(pts) < 3:
        raise DegenerateHull(f"Hull of {len(pts)} distinct point(s)")

    lower: list[Point2D] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)

    upper: list[Point2D] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)

    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateHull("All points are collinear")
    return Polygon2D(tuple(hull), obstacle_id=obstacle_id)


def signed_area(vertices: Sequence[Point2D]) -> float:
    """Shoelace area; positive for counter-clockwise outlines."""
    n = len(vertices)
    return 0.5 * sum(
        vertices[i].x * vertices[(i + 1) % n].z - vertices[(i + 1) % n].x * vertices[i].z
        for i in range(n)
    )


def is_simple(polygon: Polygon2D) -> bool:
    """True when no two non-adjacent edges touch."""
    edges = polygon.edges()
    n = len(edges)
    if n < 3:
        return True
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            a, b = edges[i]
            c, d = edges[j]
            if points_intersect(a, b, c, d):
                return False
    return True


def point_in_polygon(
    p: Point2D, polygon: Polygon2D, strict: bool = True, tol: float = ALGEBRA_TOL
) -> bool:
    """
    Even-odd membership test.

    With strict=True, points within tol of the boundary are outside;
    otherwise they are inside. Two-vertex polygons have no interior.
    """
    if len(polygon.vertices) < 3:
        return not strict and point_to_segment_distance(p, *polygon.vertices) <= tol
    if not (
        polygon.x_min - tol <= p.x <= polygon.x_max + tol
        and polygon.z_min - tol <= p.z <= polygon.z_max + tol
    ):
        return False

    edges = polygon.edges()
    for a, b in edges:
        if point_to_segment_distance(p, a, b) <= tol:
            return not strict

    inside = False
    for a, b in edges:
        if (a.z > p.z) != (b.z > p.z):
            x_cross = a.x + (p.z - a.z) * (b.x - a.x) / (b.z - a.z)
            if p.x < x_cross:
                inside = not inside
    return inside


def inflate_polygon(polygon: Polygon2D, e: float) -> Polygon2D:
    """
    Grow a polygon by e: hull of the polygon swept by a 2e square.

    The square sweep contains the disc sweep, so the result is a
    conservative inflation. Non-convex outlines become their hull.
    """
    if e <= 0:
        return polygon
    grown = [
        Point2D(v.x + dx, v.z + dz)
        for v in polygon.vertices
        for dx in (-e, e)
        for dz in (-e, e)
    ]
    return convex_hull_2d(grown, obstacle_id=polygon.obstacle_id)


def rectangle(
    x_min: float, x_max: float, z_min: float, z_max: float, obstacle_id: str = ""
) -> Polygon2D:
    """Axis-aligned rectangle, counter-clockwise from the lower-left corner."""
    return Polygon2D(
        (
            Point2D(x_min, z_min),
            Point2D(x_max, z_min),
            Point2D(x_max, z_max),
            Point2D(x_min, z_max),
        ),
        obstacle_id=obstacle_id,
    )
