"""
Shared schema helpers.
"""
from typing import Annotated

from pydantic import Field, ValidationError

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
Vec2 = Annotated[list[FiniteFloat], Field(min_length=2, max_length=2)]
Vec3 = Annotated[list[FiniteFloat], Field(min_length=3, max_length=3)]


def first_error(exc: ValidationError) -> tuple[str, str]:
    """
    Reduce a pydantic ValidationError to its first (field path, message) pair.

    Field paths use dotted notation with list indices, e.g. "obstacles.2.min".
    """
    errors = exc.errors()
    if not errors:
        return "", str(exc)
    error = errors[0]
    field = ".".join(str(loc) for loc in error["loc"])
    return field, error["msg"]
