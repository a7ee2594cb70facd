"""Exponent-algebra result schemas."""

from __future__ import annotations

from pydantic import Field, model_validator

from anisonorm.schemas.base import BaseSchema


class ExponentPoint(BaseSchema):
    p: tuple[float, ...]
    q: tuple[float, ...]

    @model_validator(mode="after")
    def _same_length(self) -> ExponentPoint:
        if len(self.p) != len(self.q):
            raise ValueError("p and q must have the same length")
        return self


class BlockRange(BaseSchema):
    """Nominal endpoints of one block plus the effective admissible interval.

    ``p_low``/``p_high`` bound the open p-interval left after every side condition;
    ``q_low``/``q_high`` bound its image under q(p).
    """

    p_minus: float
    p_plus: float
    q_minus: float
    q_plus: float
    kappa: float
    p_low: float
    p_high: float
    q_low: float
    q_high: float
    empty: bool = False

    @model_validator(mode="after")
    def _ordered(self) -> BlockRange:
        if not self.p_minus <= self.p_plus:
            raise ValueError("p_minus must not exceed p_plus")
        if not self.q_minus <= self.q_plus:
            raise ValueError("q_minus must not exceed q_plus")
        return self


class EnvelopeValue(BaseSchema):
    """Shape factors of the two-sided bound with every constant set to 1."""

    lower_shape: float = Field(gt=0.0)
    upper_shape: float = Field(gt=0.0)


class AdmissibilityReport(BaseSchema):
    passed: bool
    violations: tuple[str, ...] = ()
    q: tuple[float, ...] | None = None
    equality_flags: tuple[str, ...] = ()
    compatibility: tuple[tuple[float, float], ...] = ()
