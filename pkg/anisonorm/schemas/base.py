"""Base schema configuration."""

from typing import Any

from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Immutable schema; unknown keys are config errors."""

    model_config = ConfigDict(frozen=True, extra="forbid")


def as_tuple(value: Any) -> Any:
    """Accept a bare scalar where a tuple is expected (``partition.riesz = 1``)."""
    if value is None or isinstance(value, (list, tuple)):
        return value
    return (value,)
