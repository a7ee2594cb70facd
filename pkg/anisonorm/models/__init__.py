"""Immutable numeric containers."""

from anisonorm.models.grid import GridFunction, graded_axis, uniform_axis
from anisonorm.models.profiles import (
    Bump,
    DilatedGaussian,
    Indicator,
    LineFunction,
    PowerCutoff,
    PowerTail,
    SampledLine,
)
from anisonorm.models.psi import PGrid, PsiFunction, PsiKind
from anisonorm.models.test_function import TestFunction

__all__ = [
    "Bump",
    "DilatedGaussian",
    "GridFunction",
    "Indicator",
    "LineFunction",
    "PGrid",
    "PowerCutoff",
    "PowerTail",
    "PsiFunction",
    "PsiKind",
    "SampledLine",
    "TestFunction",
    "graded_axis",
    "uniform_axis",
]
