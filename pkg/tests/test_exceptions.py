"""Tests for custom exceptions."""

from anisonorm.exceptions import (
    AdmissibilityError,
    AnisonormError,
    BlockDimensionError,
    ConfigurationError,
    ContainerFormatError,
    DivergentIntegral,
    EmptyGrid,
    FrequencyOutOfBand,
    InadmissibleP,
    InsufficientSamples,
    NonFiniteResult,
    NumericalError,
    SingularOutputPoint,
    TruncationWarning,
    UnboundedFamily,
    UnsupportedFamily,
    ZeroDenominator,
)


def test_exception_hierarchy():
    assert issubclass(ConfigurationError, AnisonormError)
    assert issubclass(AdmissibilityError, AnisonormError)
    assert issubclass(NumericalError, AnisonormError)
    assert issubclass(InadmissibleP, AdmissibilityError)


def test_configuration_family():
    for error in (ContainerFormatError, UnsupportedFamily, BlockDimensionError):
        assert issubclass(error, ConfigurationError)


def test_numerical_family():
    for error in (
        NonFiniteResult,
        DivergentIntegral,
        SingularOutputPoint,
        FrequencyOutOfBand,
        ZeroDenominator,
        InsufficientSamples,
        EmptyGrid,
        UnboundedFamily,
    ):
        assert issubclass(error, NumericalError)


def test_inadmissible_carries_conditions():
    error = InadmissibleP("p out of range", conditions=["block 1: p_above_one"])
    assert error.conditions == ["block 1: p_above_one"]
    assert str(error) == "p out of range"
    assert InadmissibleP("bare").conditions == []


def test_truncation_is_a_warning():
    assert issubclass(TruncationWarning, UserWarning)
    assert not issubclass(TruncationWarning, AnisonormError)
