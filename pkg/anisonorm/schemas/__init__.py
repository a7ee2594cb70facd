"""Pydantic schemas for families, results and experiment configs."""

from anisonorm.schemas.container import GridSidecar
from anisonorm.schemas.estimates import BlowupFit, CheckResult, KEstimate, TransferReport
from anisonorm.schemas.experiment import ExperimentConfig
from anisonorm.schemas.exponents import (
    AdmissibilityReport,
    BlockRange,
    EnvelopeValue,
    ExponentPoint,
)
from anisonorm.schemas.family import (
    BlockKind,
    BlockParams,
    Domain,
    FamilyKind,
    OperatorFamily,
    Partition,
)
from anisonorm.schemas.test_family import ParamRange, TestFamilyKind, TestFamilySpec

__all__ = [
    "AdmissibilityReport",
    "BlockKind",
    "BlockParams",
    "BlockRange",
    "BlowupFit",
    "CheckResult",
    "Domain",
    "EnvelopeValue",
    "ExperimentConfig",
    "ExponentPoint",
    "FamilyKind",
    "GridSidecar",
    "KEstimate",
    "OperatorFamily",
    "ParamRange",
    "Partition",
    "TestFamilyKind",
    "TestFamilySpec",
    "TransferReport",
]
