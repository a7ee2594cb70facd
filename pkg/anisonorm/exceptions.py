"""Custom exceptions for the toolkit."""

from __future__ import annotations


class AnisonormError(Exception):
    """Base exception for anisonorm."""

    pass


class ConfigurationError(AnisonormError):
    """Error in a settings value or an experiment config file."""

    pass


class ContainerFormatError(ConfigurationError):
    """Malformed GridFunction container or sidecar."""

    pass


class UnsupportedFamily(ConfigurationError):
    """Operator family has no numeric evaluation route."""

    pass


class BlockDimensionError(ConfigurationError):
    """Grid-based evaluation requested for a block with m_j >= 2."""

    pass


class AdmissibilityError(AnisonormError):
    """Exponent vector outside the admissible region of a family."""

    pass


class InadmissibleP(AdmissibilityError):
    """Some p_j is outside its open range or its q_j breaks a side condition."""

    def __init__(self, message: str, conditions: list[str] | None = None) -> None:
        super().__init__(message)
        self.conditions = list(conditions or [])


class NumericalError(AnisonormError):
    """Numeric evaluation failed."""

    pass


class NonFiniteResult(NumericalError):
    """Overflow or NaN in a norm or operator value."""

    pass


class DivergentIntegral(NumericalError):
    """Integrand singularity is not integrable (exponent <= -1)."""

    pass


class SingularOutputPoint(NumericalError):
    """Output requested at a point where the output weight is singular."""

    pass


class FrequencyOutOfBand(NumericalError):
    """Frequency beyond the resolvable band of the source grid."""

    pass


class ZeroDenominator(NumericalError):
    """Ratio requested for a function with zero norm."""

    pass


class InsufficientSamples(NumericalError):
    """Too few samples for a fit."""

    pass


class EmptyGrid(NumericalError):
    """Exponent grid has no points."""

    pass


class UnboundedFamily(NumericalError):
    """Some family member has a non-finite norm on the grid."""

    pass


class TruncationWarning(UserWarning):
    """Truncated tail estimate exceeds the target tolerance."""
