"""Estimator result schemas."""

from __future__ import annotations

import math

from pydantic import Field, field_validator, model_validator

from anisonorm.schemas.base import BaseSchema
from anisonorm.schemas.test_family import TestFamilyKind


class KEstimate(BaseSchema):
    """Sampled lower bound of the operator norm at one exponent vector."""

    p: tuple[float, ...]
    q: tuple[float, ...]
    lower_bound: float = Field(gt=0.0)
    witness: dict[str, float] = Field(default_factory=dict)
    kind: TestFamilyKind | None = None
    quadrature_tolerance: float = Field(default=1e-7, gt=0.0)
    degenerate: bool = False
    evaluations: int = 0

    @field_validator("lower_bound")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("lower_bound must be finite")
        return value


class BlowupFit(BaseSchema):
    """Log-log fit of lower bounds against the distance to a block endpoint."""

    block: int = Field(ge=1)
    side: str
    endpoint: float
    samples: tuple[tuple[float, float], ...]
    fitted_slope: float
    intercept: float
    residual: float = Field(ge=0.0)
    expected_slope: float | None = None

    @model_validator(mode="after")
    def _decreasing(self) -> BlowupFit:
        eps = [s[0] for s in self.samples]
        if any(b >= a for a, b in zip(eps, eps[1:], strict=False)):
            raise ValueError("distances must be strictly decreasing")
        return self

    @property
    def label(self) -> str:
        return f"block {self.block} {self.side}"


class TransferReport(BaseSchema):
    """Margins ||Tf||AG(nu) / ||f||AG(psi) of the holdout functions."""

    constant: float = Field(gt=0.0)
    margins: tuple[float, ...]
    holdout: tuple[dict[str, float], ...]
    calibration_size: int
    grid_size: int
    tolerance: float = 0.05

    @property
    def worst(self) -> float:
        return max(self.margins) if self.margins else 0.0

    @property
    def passed(self) -> bool:
        return self.worst <= 1.0 + self.tolerance


class CheckResult(BaseSchema):
    """Outcome of one named invariant check."""

    name: str
    passed: bool
    detail: str = ""
    worst: float = 0.0
    elapsed: float = Field(default=0.0, ge=0.0)
