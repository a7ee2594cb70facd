"""Operator family schemas."""

from __future__ import annotations

from enum import StrEnum
from typing import Annotated

from pydantic import BeforeValidator, Field, model_validator

from anisonorm.schemas.base import BaseSchema, as_tuple


class FamilyKind(StrEnum):
    RIESZ_FULL = "RieszFull"
    RIESZ_INTERIOR = "RieszInterior"
    RIESZ_EXTERIOR = "RieszExterior"
    LOG_RIESZ = "LogRiesz"
    FOURIER_WEIGHTED = "FourierWeighted"
    FOURIER_SLOW_VARY = "FourierSlowVary"
    COMPOSED = "Composed"
    MIXTURE = "Mixture"


class BlockKind(StrEnum):
    """Exponent relation a single block obeys."""

    RIESZ = "riesz"
    LOG_RIESZ = "log_riesz"
    FOURIER = "fourier"
    MIXTURE = "mixture"


class Domain(StrEnum):
    FULL = "full"
    INTERIOR = "interior"
    EXTERIOR = "exterior"


_DOMAINS = {
    FamilyKind.RIESZ_INTERIOR: Domain.INTERIOR,
    FamilyKind.RIESZ_EXTERIOR: Domain.EXTERIOR,
}


class BlockParams(BaseSchema):
    """Weights of one coordinate block."""

    m: int = Field(default=1, ge=1)
    alpha: float = Field(default=0.0, ge=0.0)
    beta: float = Field(default=0.0, ge=0.0)
    gamma: float | None = None
    delta: float | None = Field(default=None, gt=0.0)
    slow_vary_id: str | None = None


class Partition(BaseSchema):
    """1-based block indices of the Riesz and Fourier factors of a composed family."""

    riesz: Annotated[tuple[int, ...], BeforeValidator(as_tuple)]
    fourier: Annotated[tuple[int, ...], BeforeValidator(as_tuple)]


def block_violations(kind: BlockKind, block: BlockParams) -> list[str]:
    """Names of the parameter invariants a block breaks for the given relation."""
    violations: list[str] = []
    m = block.m
    if kind is BlockKind.RIESZ:
        if block.gamma is None:
            return ["gamma_required"]
        if block.gamma < 0:
            violations.append("gamma_nonnegative")
        if block.alpha + block.gamma >= m:
            violations.append("alpha_plus_gamma_lt_m")
    elif kind is BlockKind.LOG_RIESZ:
        if not 0 < block.alpha < m:
            violations.append("alpha_in_open_0_m")
        if block.delta is None:
            violations.append("delta_required")
    elif kind is BlockKind.FOURIER:
        if block.beta >= m:
            violations.append("beta_lt_m")
    else:
        if block.gamma is None:
            return ["gamma_required"]
        if block.alpha - block.gamma <= 0:
            violations.append("alpha_minus_gamma_positive")
        if block.gamma >= m:
            violations.append("gamma_lt_m")
        if block.alpha + block.beta <= block.gamma:
            violations.append("alpha_plus_beta_gt_gamma")
        if block.beta >= m:
            violations.append("beta_lt_m")
    return violations


class OperatorFamily(BaseSchema):
    """Tagged operator family with per-block parameters."""

    kind: FamilyKind
    blocks: tuple[BlockParams, ...] = Field(min_length=1)
    partition: Partition | None = None
    domain_radius: float | None = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _check_invariants(self) -> OperatorFamily:
        problems: list[str] = []
        if self.kind is FamilyKind.COMPOSED:
            problems.extend(self._partition_violations())
        if self.kind in _DOMAINS and self.domain_radius is None:
            problems.append("family: domain_radius_required")
        if not problems:
            for index, block in enumerate(self.blocks):
                for name in block_violations(self.block_kind(index), block):
                    problems.append(f"block {index + 1}: {name}")
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def _partition_violations(self) -> list[str]:
        if self.partition is None:
            return ["family: partition_required"]
        riesz, fourier = set(self.partition.riesz), set(self.partition.fourier)
        problems = []
        if not riesz or not fourier:
            problems.append("partition: partition_nonempty")
        if riesz & fourier:
            problems.append("partition: partition_disjoint")
        if riesz | fourier != set(range(1, self.l + 1)):
            problems.append("partition: partition_cover")
        return problems

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.blocks)

    @property
    def d(self) -> int:
        return sum(block.m for block in self.blocks)

    @property
    def domain(self) -> Domain:
        return _DOMAINS.get(self.kind, Domain.FULL)

    def block_kind(self, index: int) -> BlockKind:
        """Relation obeyed by block ``index`` (0-based)."""
        if self.kind in (
            FamilyKind.RIESZ_FULL,
            FamilyKind.RIESZ_INTERIOR,
            FamilyKind.RIESZ_EXTERIOR,
        ):
            return BlockKind.RIESZ
        if self.kind is FamilyKind.LOG_RIESZ:
            return BlockKind.LOG_RIESZ
        if self.kind in (FamilyKind.FOURIER_WEIGHTED, FamilyKind.FOURIER_SLOW_VARY):
            return BlockKind.FOURIER
        if self.kind is FamilyKind.MIXTURE:
            return BlockKind.MIXTURE
        assert self.partition is not None
        return BlockKind.RIESZ if index + 1 in self.partition.riesz else BlockKind.FOURIER
