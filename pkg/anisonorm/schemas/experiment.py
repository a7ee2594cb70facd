"""Declarative experiment configuration."""

from __future__ import annotations

from typing import Annotated, Literal

from pydantic import BeforeValidator, Field, ValidationError, model_validator

from anisonorm.schemas.base import BaseSchema, as_tuple
from anisonorm.schemas.family import BlockParams, FamilyKind, OperatorFamily, Partition
from anisonorm.schemas.test_family import TestFamilySpec

FloatTuple = Annotated[tuple[float, ...], BeforeValidator(as_tuple)]
IntTuple = Annotated[tuple[int, ...], BeforeValidator(as_tuple)]


class FamilySection(BaseSchema):
    kind: FamilyKind
    domain_radius: float | None = Field(default=None, gt=0.0)
    partition: Partition | None = None


class PGridSpec(BaseSchema):
    """Exponent grid; the box defaults to the effective admissible ranges."""

    lower: FloatTuple | None = None
    upper: FloatTuple | None = None
    points: int = Field(default=8, ge=2, le=256)
    offset: float = Field(default=1e-2, gt=0.0)
    infinite_span: float = Field(default=8.0, gt=0.0)


class GridSpec(BaseSchema):
    """Sampling axes used by the grid path (``apply``)."""

    lengths: IntTuple = (257,)
    radii: FloatTuple = (4.0,)
    grading: float = Field(default=1.0, ge=1.0, le=4.0)


class ScanSpec(BaseSchema):
    block: int = Field(default=1, ge=1)
    endpoint: Literal["plus", "minus"] = "plus"
    ladder: int = Field(default=6, ge=5, le=20)
    start: float = Field(default=0.2, gt=0.0, lt=1.0)
    blowup: bool = True


class TransferSpec(BaseSchema):
    psi: Literal["constant", "spike", "natural"] = "constant"
    spike: FloatTuple | None = None
    calibration: int = Field(default=8, ge=1, le=64)
    holdout: int = Field(default=10, ge=1, le=64)
    tolerance: float = Field(default=0.05, ge=0.0)


class ApplySpec(BaseSchema):
    input: str | None = None
    point: FloatTuple | None = None


class ExperimentConfig(BaseSchema):
    """Everything one CLI run needs; parsed from the flat key-value file."""

    name: str = "experiment"
    family: FamilySection
    blocks: tuple[BlockParams, ...] = Field(min_length=1)
    pgrid: PGridSpec = PGridSpec()
    test_family: TestFamilySpec = TestFamilySpec()
    grid: GridSpec = GridSpec()
    scan: ScanSpec = ScanSpec()
    transfer: TransferSpec = TransferSpec()
    apply: ApplySpec = ApplySpec()
    tolerance: float = Field(default=1e-7, gt=0.0)
    output: str | None = None
    seed: str = "default"

    @model_validator(mode="after")
    def _consistent(self) -> ExperimentConfig:
        self.operator_family()
        l = len(self.blocks)  # noqa: E741
        for name, values in (("pgrid.lower", self.pgrid.lower), ("pgrid.upper", self.pgrid.upper)):
            if values is not None and len(values) != l:
                raise ValueError(f"{name}: expected {l} values, got {len(values)}")
        if self.transfer.spike is not None and len(self.transfer.spike) != l:
            raise ValueError(f"transfer.spike: expected {l} values")
        if len(self.grid.lengths) not in (1, l) or len(self.grid.radii) not in (1, l):
            raise ValueError(f"grid: lengths and radii need 1 or {l} values")
        if self.scan.block > l:
            raise ValueError(f"scan.block: family has only {l} blocks")
        return self

    def operator_family(self) -> OperatorFamily:
        try:
            return OperatorFamily(
                kind=self.family.kind,
                blocks=self.blocks,
                partition=self.family.partition,
                domain_radius=self.family.domain_radius,
            )
        except ValidationError as e:
            messages = "; ".join(
                str(err["msg"]).removeprefix("Value error, ") for err in e.errors()
            )
            raise ValueError(messages) from e

    def axis_lengths(self) -> tuple[int, ...]:
        return _broadcast(self.grid.lengths, len(self.blocks))

    def axis_radii(self) -> tuple[float, ...]:
        return _broadcast(self.grid.radii, len(self.blocks))


def _broadcast(values: tuple, n: int) -> tuple:
    return values * n if len(values) == 1 else values
