"""Sidecar metadata written next to every GridFunction container."""

from __future__ import annotations

from typing import Literal

from pydantic import Field

from anisonorm.schemas.base import BaseSchema
from anisonorm.schemas.family import OperatorFamily


class GridSidecar(BaseSchema):
    format: Literal["ANGF"] = "ANGF"
    version: int = 1
    dtype: Literal["float64", "complex128"] = "float64"
    lengths: tuple[int, ...]
    truncation_radii: tuple[float, ...]
    axis_order: tuple[str, ...] = Field(description="Axis 0 is x_1, the innermost norm variable.")
    tolerance: float | None = None
    family: OperatorFamily | None = None
    source: str | None = None
