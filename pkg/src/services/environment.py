"""
Environment ingestion, persistence, validation and seeded scenario generation.
"""
import json
from collections.abc import Sequence
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, TypeVar, Union

import numpy as np
from pydantic import ValidationError

from src.core.exceptions import (
    InvalidExtension,
    InvariantViolation,
    PlacementFailure,
    SchemaViolation,
    StartOrGoalBlocked,
)
from src.core.logging import get_logger
from src.models.enums import ScenarioPreset
from src.models.environment import Environment, Environment2D, Sbbox, Target
from src.models.geometry import Point2D, Point3D
from src.schemas.common import first_error
from src.schemas.environment import Environment2DFile, EnvironmentFile
from src.services.collision import blocking_polygon
from src.services.geometry import inflate_polygon, is_simple, rectangle, signed_area
from src.utils.files import atomic_write_text, dump_json, read_text

logger = get_logger(__name__)

DEFAULT_SAFE_DISTANCE = 5.0
DEFAULT_FRUIT_SIZE = Point3D(40.0, 40.0, 40.0)
DEFAULT_FLOOR_CLEARANCE = 20.0
MAX_PLACEMENT_ATTEMPTS = 10_000

AnyEnvironment = Union[Environment, Environment2D]


# Validation


def validate_environment(env: Environment, e: float = DEFAULT_SAFE_DISTANCE) -> Environment:
    """
    Check the invariants the planners rely on.

    Raises:
        InvariantViolation: Endpoint out of bounds, or stem not reaching the top
        StartOrGoalBlocked: Start or end inside an inflated obstacle
    """
    for name, point in (("start", env.start), ("end", env.end)):
        if not env.in_bounds(point):
            raise InvariantViolation(f"{name} {tuple(point)} lies outside the bounds")

    for box in env.obstacles:
        if box.stem_extended and box.max_corner.z != env.bounds_max.z:
            raise InvariantViolation(
                f"Obstacle '{box.fruit_id}' is stem-extended but its top "
                f"{box.max_corner.z} differs from the bounds top {env.bounds_max.z}"
            )
        grown = box.inflated(e)
        for name, point in (("start", env.start), ("end", env.end)):
            if grown.contains(point):
                raise StartOrGoalBlocked(
                    f"{name} {tuple(point)} lies inside obstacle '{box.fruit_id}'",
                    obstacle_id=box.fruit_id,
                )
    return env


def validate_environment_2d(
    env: Environment2D, e: float = DEFAULT_SAFE_DISTANCE
) -> Environment2D:
    """
    Raises:
        InvariantViolation: Polygon not simple or not counter-clockwise,
            or endpoint out of bounds
        StartOrGoalBlocked: Start or end inside an inflated polygon
    """
    for name, point in (("start", env.start), ("end", env.end)):
        if not env.in_bounds(point):
            raise InvariantViolation(f"{name} {tuple(point)} lies outside the bounds")

    for poly in env.obstacles:
        if len(poly.vertices) >= 3:
            if signed_area(poly.vertices) <= 0:
                raise InvariantViolation(f"Obstacle '{poly.obstacle_id}' is not counter-clockwise")
            if not is_simple(poly):
                raise InvariantViolation(f"Obstacle '{poly.obstacle_id}' is not simple")

    inflated = [inflate_polygon(p, e) for p in env.obstacles]
    for name, point in (("start", env.start), ("end", env.end)):
        blocker = blocking_polygon(point, inflated)
        if blocker is not None:
            raise StartOrGoalBlocked(
                f"{name} {tuple(point)} lies inside obstacle '{blocker.obstacle_id}'",
                obstacle_id=blocker.obstacle_id,
            )
    return env


# Files


def _parse(path: str | Path) -> dict:
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    if not isinstance(data, dict):
        raise SchemaViolation("top level must be an object")
    return data


def _is_planar(data: dict) -> bool:
    bounds = data.get("bounds")
    if isinstance(bounds, dict) and isinstance(bounds.get("min"), list):
        return len(bounds["min"]) == 2
    return False


def load_environment(path: str | Path, e: float = DEFAULT_SAFE_DISTANCE) -> Environment:
    """
    Load and validate a 3D environment file.

    Raises:
        IoError: File unreadable
        SchemaViolation: Malformed content, with the offending field path
        InvariantViolation: Content breaks an environment invariant
    """
    data = _parse(path)
    try:
        env = EnvironmentFile.model_validate(data).to_domain()
    except ValidationError as exc:
        field, message = first_error(exc)
        raise SchemaViolation(message, field_path=field) from exc
    return validate_environment(env, e)


def load_environment_2d(path: str | Path, e: float = DEFAULT_SAFE_DISTANCE) -> Environment2D:
    data = _parse(path)
    try:
        env = Environment2DFile.model_validate(data).to_domain()
    except ValidationError as exc:
        field, message = first_error(exc)
        raise SchemaViolation(message, field_path=field) from exc
    return validate_environment_2d(env, e)


def load_any_environment(path: str | Path, e: float = DEFAULT_SAFE_DISTANCE) -> AnyEnvironment:
    """Load a 2D or 3D environment, telling them apart by the bounds arity."""
    if _is_planar(_parse(path)):
        return load_environment_2d(path, e)
    return load_environment(path, e)


def environment_to_json(env: AnyEnvironment) -> str:
    model: EnvironmentFile | Environment2DFile
    if isinstance(env, Environment2D):
        model = Environment2DFile.from_domain(env)
    else:
        model = EnvironmentFile.from_domain(env)
    return dump_json(model.model_dump(mode="json", exclude_none=True))


def save_environment(env: AnyEnvironment, path: str | Path) -> None:
    """Write env atomically. Floats round-trip bit-exactly."""
    atomic_write_text(path, environment_to_json(env))


# Transformations


def extend_stem(sbbox: Sbbox, z_top: float) -> Sbbox:
    """
    Stretch a fruit box up to z_top so it also covers the stem.

    Raises:
        InvalidExtension: If z_top lies below the box top
    """
    if z_top < sbbox.max_corner.z:
        raise InvalidExtension(
            f"Cannot extend '{sbbox.fruit_id}' down to {z_top}: top is at {sbbox.max_corner.z}"
        )
    return replace(
        sbbox,
        max_corner=Point3D(sbbox.max_corner.x, sbbox.max_corner.y, z_top),
        stem_extended=True,
    )


def project_to_xoz(env: Environment) -> Environment2D:
    """Drop y: boxes become x-z rectangles, points become (x, z)."""
    return Environment2D(
        bounds_min=Point2D(env.bounds_min.x, env.bounds_min.z),
        bounds_max=Point2D(env.bounds_max.x, env.bounds_max.z),
        start=Point2D(env.start.x, env.start.z),
        end=Point2D(env.end.x, env.end.z),
        obstacles=tuple(
            rectangle(
                o.min_corner.x, o.max_corner.x, o.min_corner.z, o.max_corner.z, o.fruit_id
            )
            for o in env.obstacles
        ),
    )


T = TypeVar("T", Target, Point3D)


def _center(item: Target | Point3D) -> Point3D:
    return item.center if isinstance(item, Target) else item


def harvest_sequence(targets: Sequence[T]) -> list[T]:
    """Bottom-to-top picking order: ascending z, then x, then y."""
    return sorted(targets, key=lambda t: (_center(t).z, _center(t).x, _center(t).y))


# Generation


@dataclass(frozen=True)
class PresetSpec:
    n_fruits: int
    bounds_min: Point3D
    bounds_max: Point3D
    start: Point3D
    end: Point3D


PRESETS: dict[ScenarioPreset, PresetSpec] = {
    ScenarioPreset.ENVIRONMENT_1: PresetSpec(
        5, Point3D(0, 0, 0), Point3D(400, 300, 500), Point3D(40, 120, 280), Point3D(395, 145, 330)
    ),
    ScenarioPreset.ENVIRONMENT_2: PresetSpec(
        13, Point3D(0, 0, 0), Point3D(500, 300, 500), Point3D(40, 120, 280), Point3D(465, 145, 330)
    ),
    ScenarioPreset.SHORT_DISTANCE: PresetSpec(
        4, Point3D(0, 0, 0), Point3D(400, 300, 500), Point3D(150, 120, 280), Point3D(260, 145, 330)
    ),
    ScenarioPreset.LONG_DISTANCE: PresetSpec(
        8, Point3D(0, 0, 0), Point3D(500, 300, 500), Point3D(20, 60, 260), Point3D(480, 240, 340)
    ),
    ScenarioPreset.DENSE_OBSTACLES: PresetSpec(
        20, Point3D(0, 0, 0), Point3D(500, 300, 500), Point3D(40, 120, 280), Point3D(465, 145, 330)
    ),
}


def _overlaps(lo_a: np.ndarray, hi_a: np.ndarray, lo_b: np.ndarray, hi_b: np.ndarray) -> bool:
    return bool(np.all(lo_a <= hi_b) and np.all(lo_b <= hi_a))


def generate_scenario(
    seed: int,
    n_fruits: int,
    bounds_min: Point3D,
    bounds_max: Point3D,
    start: Point3D,
    end: Point3D,
    fruit_size: Point3D = DEFAULT_FRUIT_SIZE,
    e: float = DEFAULT_SAFE_DISTANCE,
    floor_clearance: float = DEFAULT_FLOOR_CLEARANCE,
    xoz_clear: bool = False,
) -> Environment:
    """
    Place n_fruits stem-extended fruit boxes uniformly at random.

    A draw is rejected when its inflated box overlaps an earlier inflated
    box or contains start or end.

    Args:
        seed: Seed of the placement stream
        n_fruits: Number of fruits
        bounds_min: Lower workspace corner
        bounds_max: Upper workspace corner
        start: Arm start point
        end: Arm goal point
        fruit_size: Fruit body size before stem extension (mm)
        e: Safe distance used for the inflated-box rules
        floor_clearance: Minimum gap between a fruit bottom and the floor
        xoz_clear: Also keep start and end outside every inflated box
            in the x-z projection, so the xoz view is plannable

    Returns:
        Validated environment with one target per fruit

    Raises:
        PlacementFailure: A fruit could not be placed in 10,000 draws
    """
    if n_fruits < 0:
        raise PlacementFailure(f"Negative fruit count {n_fruits}")

    size = np.asarray(fruit_size, dtype=float)
    half = size / 2.0
    low = np.asarray(bounds_min, dtype=float) + half
    high = np.asarray(bounds_max, dtype=float) - half
    low[2] = max(low[2], bounds_min.z + floor_clearance + half[2])
    if np.any(low > high):
        raise PlacementFailure(f"Fruit of size {tuple(fruit_size)} does not fit in the bounds")

    rng = np.random.default_rng(seed)
    start_arr = np.asarray(start, dtype=float)
    end_arr = np.asarray(end, dtype=float)
    placed: list[tuple[np.ndarray, np.ndarray]] = []
    obstacles: list[Sbbox] = []
    targets: list[Target] = []

    for index in range(n_fruits):
        for _ in range(MAX_PLACEMENT_ATTEMPTS):
            center = rng.uniform(low, high)
            lo = center - half - e
            hi = center + half + e
            hi[2] = bounds_max.z + e
            if any(np.all((lo <= p) & (p <= hi)) for p in (start_arr, end_arr)):
                continue
            if xoz_clear and any(
                np.all((lo[::2] <= p[::2]) & (p[::2] <= hi[::2])) for p in (start_arr, end_arr)
            ):
                continue
            if any(_overlaps(lo, hi, plo, phi) for plo, phi in placed):
                continue
            break
        else:
            raise PlacementFailure(
                f"Could not place fruit {index + 1} of {n_fruits} after "
                f"{MAX_PLACEMENT_ATTEMPTS} attempts"
            )

        placed.append((lo, hi))
        fruit_id = f"f{index + 1:02d}"
        body = Sbbox(
            min_corner=Point3D(*(float(c) for c in center - half)),
            max_corner=Point3D(*(float(c) for c in center + half)),
            fruit_id=fruit_id,
        )
        obstacles.append(extend_stem(body, bounds_max.z))
        targets.append(Target(fruit_id, Point3D(*(float(c) for c in center))))

    env = Environment(
        bounds_min=bounds_min,
        bounds_max=bounds_max,
        start=start,
        end=end,
        obstacles=tuple(obstacles),
        targets=tuple(targets),
        fruit_size=Point3D(*(float(s) for s in size)),
    )
    logger.debug(
        f"Generated scenario seed={seed} with {n_fruits} fruits",
        extra={"event_type": "scenario_generated"},
    )
    return validate_environment(env, e)


def generate_from_preset(
    preset: ScenarioPreset,
    seed: int,
    n_fruits: Optional[int] = None,
    fruit_size: Point3D = DEFAULT_FRUIT_SIZE,
    e: float = DEFAULT_SAFE_DISTANCE,
    xoz_clear: bool = False,
) -> Environment:
    """Generate a scenario with a preset's bounds and endpoints."""
    spec = PRESETS[preset]
    return generate_scenario(
        seed=seed,
        n_fruits=spec.n_fruits if n_fruits is None else n_fruits,
        bounds_min=spec.bounds_min,
        bounds_max=spec.bounds_max,
        start=spec.start,
        end=spec.end,
        fruit_size=fruit_size,
        e=e,
        xoz_clear=xoz_clear,
    )
