"""
Pytest configuration and fixtures for ILMSA planner testing.
"""
import logging
from collections.abc import Generator

import pytest

from src.models.enums import ScenarioPreset
from src.models.environment import Environment, Environment2D, Sbbox
from src.models.geometry import Point2D, Point3D, Polygon2D
from src.schemas.config import RunConfig
from src.services.environment import generate_from_preset
from src.services.geometry import rectangle


@pytest.fixture
def square() -> Polygon2D:
    """Square obstacle x in [40, 60], z in [40, 60]."""
    return rectangle(40.0, 60.0, 40.0, 60.0, obstacle_id="sq")


@pytest.fixture
def square_env_2d(square: Polygon2D) -> Environment2D:
    """Planar workspace with the square between start (0, 50) and end (100, 50)."""
    return Environment2D(
        bounds_min=Point2D(0.0, 0.0),
        bounds_max=Point2D(100.0, 100.0),
        start=Point2D(0.0, 50.0),
        end=Point2D(100.0, 50.0),
        obstacles=(square,),
    )


@pytest.fixture
def box_env() -> Environment:
    """One fruit box centred between start and end at equal height."""
    return Environment(
        bounds_min=Point3D(0.0, 0.0, 0.0),
        bounds_max=Point3D(300.0, 300.0, 500.0),
        start=Point3D(0.0, 150.0, 250.0),
        end=Point3D(200.0, 150.0, 250.0),
        obstacles=(
            Sbbox(
                min_corner=Point3D(80.0, 130.0, 230.0),
                max_corner=Point3D(120.0, 170.0, 270.0),
                fruit_id="f01",
            ),
        ),
    )


@pytest.fixture
def empty_env(box_env: Environment) -> Environment:
    return Environment(
        bounds_min=box_env.bounds_min,
        bounds_max=box_env.bounds_max,
        start=box_env.start,
        end=box_env.end,
    )


@pytest.fixture
def generated_env() -> Environment:
    """Seeded five-fruit scenario plannable in 3D and in its xoz projection."""
    return generate_from_preset(ScenarioPreset.ENVIRONMENT_1, seed=3, xoz_clear=True)


@pytest.fixture
def run_config() -> RunConfig:
    return RunConfig()


@pytest.fixture
def fast_config() -> RunConfig:
    """Coarse sweep and a small sample budget for quick runs."""
    return RunConfig.layered(
        {
            "sweep": {"delta_theta": 30.0, "workers": 1},
            "baseline": {"max_samples": 5000},
        }
    )


@pytest.fixture
def restore_logging() -> Generator[None, None, None]:
    """Put the root logger back the way the test found it."""
    root = logging.getLogger()
    handlers = root.handlers[:]
    level = root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)
