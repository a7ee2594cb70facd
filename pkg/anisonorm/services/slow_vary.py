"""Registry of slowly varying weight factors.

A function S is slowly varying when S(xz)/S(z) -> 1 for every fixed x > 0, both as
z -> infinity and (for symmetric weights) as z -> 0. Registration checks this
numerically on geometric grids; pairs (L, M) additionally need M(z) comparable to
L(1/z) over the whole half-line.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from anisonorm.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

SlowFunction = Callable[[np.ndarray], np.ndarray]

DILATION_FACTORS = (0.5, 2.0)
FAR_DECADE = 12
MAX_FAR_DEVIATION = 0.05
MAX_PAIR_RATIO_SPREAD = 100.0


@dataclass(frozen=True)
class SlowPair:
    name: str
    lower: SlowFunction  # L
    upper: SlowFunction  # M


def _log_symmetric(z: np.ndarray) -> np.ndarray:
    return np.log(math.e + z) + np.log(math.e + 1.0 / z)


def _loglog_symmetric(z: np.ndarray) -> np.ndarray:
    return np.log(math.e + np.log(math.e + z) + np.log(math.e + 1.0 / z))


def _constant(z: np.ndarray) -> np.ndarray:
    return np.ones_like(np.asarray(z, dtype=float))


def _deviation_profile(fn: SlowFunction, zs: np.ndarray) -> np.ndarray:
    """max_x |S(xz)/S(z) - 1| at each z."""
    base = fn(zs)
    if np.any(~np.isfinite(base)) or np.any(base <= 0):
        raise ConfigurationError("slowly varying function must be positive and finite")
    deviations = [np.abs(fn(factor * zs) / base - 1.0) for factor in DILATION_FACTORS]
    return np.max(deviations, axis=0)


def check_slow_variation(fn: SlowFunction, at_zero: bool = True) -> float:
    """Return the worst far-end deviation; raise if S is not slowly varying."""
    worst = 0.0
    directions = [np.logspace(2, FAR_DECADE, 6)]
    if at_zero:
        directions.append(np.logspace(-2, -FAR_DECADE, 6))
    for zs in directions:
        profile = _deviation_profile(fn, zs)
        far = float(profile[-1])
        # Deviation must shrink toward the far end and be small there.
        if far > MAX_FAR_DEVIATION or far > float(profile[0]) + 1e-12:
            raise ConfigurationError(
                f"function is not slowly varying (deviation {far:.3g} at z={zs[-1]:.1e})"
            )
        worst = max(worst, far)
    return worst


class SlowVaryRegistry:
    """Named slowly varying functions and (L, M) pairs."""

    def __init__(self) -> None:
        self._functions: dict[str, SlowFunction] = {}
        self._pairs: dict[str, SlowPair] = {}

    def register(self, name: str, fn: SlowFunction, at_zero: bool = True) -> None:
        check_slow_variation(fn, at_zero=at_zero)
        self._functions[name] = fn
        logger.debug("Registered slowly varying function %s", name)

    def register_pair(self, name: str, lower: SlowFunction, upper: SlowFunction) -> None:
        check_slow_variation(lower)
        check_slow_variation(upper)
        self._pairs[name] = SlowPair(name=name, lower=lower, upper=upper)

    def get(self, name: str | None) -> SlowFunction:
        key = name or "constant"
        try:
            return self._functions[key]
        except KeyError as e:
            raise ConfigurationError(f"unknown slowly varying function: {key}") from e

    def get_pair(self, name: str | None) -> SlowPair:
        key = name or "constant"
        try:
            return self._pairs[key]
        except KeyError as e:
            raise ConfigurationError(f"unknown slowly varying pair: {key}") from e

    def names(self) -> list[str]:
        return sorted(self._functions)


def pair_ratio_bounds(pair: SlowPair, decades: int = FAR_DECADE) -> tuple[float, float]:
    """(min, max) of M(z)/L(1/z) on a logarithmic z-grid."""
    zs = np.logspace(-decades, decades, 20 * decades + 1)
    ratio = pair.upper(zs) / pair.lower(1.0 / zs)
    return float(np.min(ratio)), float(np.max(ratio))


def pair_compatible(bounds: tuple[float, float]) -> bool:
    low, high = bounds
    return low > 0 and math.isfinite(high) and high / low <= MAX_PAIR_RATIO_SPREAD


def _default_registry() -> SlowVaryRegistry:
    registry = SlowVaryRegistry()
    for name, fn in (
        ("constant", _constant),
        ("log_symmetric", _log_symmetric),
        ("loglog_symmetric", _loglog_symmetric),
    ):
        registry.register(name, fn)
        registry.register_pair(name, fn, fn)
    return registry


registry = _default_registry()
