"""One-dimensional source profiles with declared singular structure.

Each profile knows where it is supported, where it jumps (cuts) and where it
behaves like ``|y - s|**e`` (singularities), so quadrature can split and grade
there instead of sampling blindly.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from anisonorm.exceptions import ConfigurationError

GAUSSIAN_CUT = 6.5
Singularity = tuple[float, float]


class LineFunction(ABC):
    amplitude: float

    @abstractmethod
    def __call__(self, y: np.ndarray) -> np.ndarray: ...

    @property
    @abstractmethod
    def support(self) -> tuple[float, float]: ...

    @property
    def singularities(self) -> tuple[Singularity, ...]:
        return ()

    @property
    def cuts(self) -> tuple[float, ...]:
        return ()

    @property
    @abstractmethod
    def scale(self) -> float:
        """Characteristic length; quadrature panels never exceed it."""

    @property
    def is_even(self) -> bool:
        return False

    @abstractmethod
    def dilate(self, lam: float) -> LineFunction:
        """Profile of ``y -> f(lam * y)``."""

    @abstractmethod
    def scaled(self, factor: float) -> LineFunction: ...

    @property
    @abstractmethod
    def params(self) -> dict[str, float]: ...

    def exponent_at(self, point: float) -> float:
        return sum(e for s, e in self.singularities if s == point)

    @property
    def extent(self) -> float:
        lo, hi = self.support
        return max(abs(lo), abs(hi))

    def sample(self, axis: np.ndarray) -> np.ndarray:
        """Values on a grid; nodes sitting on a singularity sample as 0."""
        values = self(np.asarray(axis, dtype=float))
        return np.where(np.isfinite(values), values, 0.0)


def _check_lam(lam: float) -> None:
    if not lam > 0:
        raise ConfigurationError(f"dilation must be positive, got {lam}")


@dataclass(frozen=True)
class PowerCutoff(LineFunction):
    """``amplitude * |y|**a * exp(-taper * y**2)`` on ``0 < |y| <= radius``.

    A positive taper cuts the profile where the Gaussian factor drops below
    1e-18, as for :class:`DilatedGaussian`.
    """

    a: float
    radius: float = 1.0
    amplitude: float = 1.0
    taper: float = 0.0

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ConfigurationError("PowerCutoff radius must be positive")
        if not self.taper >= 0:
            raise ConfigurationError("PowerCutoff taper must be non-negative")

    @property
    def edge(self) -> float:
        if self.taper > 0:
            return min(self.radius, GAUSSIAN_CUT / math.sqrt(self.taper))
        return self.radius

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.abs(np.asarray(y, dtype=float))
        out = np.zeros_like(y)
        mask = (y > 0) & (y <= self.edge)
        out[mask] = self.amplitude * y[mask] ** self.a * np.exp(-self.taper * y[mask] ** 2)
        return out

    @property
    def support(self) -> tuple[float, float]:
        return -self.edge, self.edge

    @property
    def singularities(self) -> tuple[Singularity, ...]:
        return ((0.0, self.a),)

    @property
    def cuts(self) -> tuple[float, ...]:
        return -self.edge, 0.0, self.edge

    @property
    def scale(self) -> float:
        if self.taper > 0:
            return min(self.radius, 1.0 / math.sqrt(self.taper))
        return self.radius

    @property
    def is_even(self) -> bool:
        return True

    def dilate(self, lam: float) -> PowerCutoff:
        _check_lam(lam)
        return PowerCutoff(
            self.a, self.radius / lam, self.amplitude * lam**self.a, self.taper * lam * lam
        )

    def scaled(self, factor: float) -> PowerCutoff:
        return PowerCutoff(self.a, self.radius, self.amplitude * factor, self.taper)

    @property
    def params(self) -> dict[str, float]:
        params = {"a": self.a, "radius": self.radius}
        if self.taper > 0:
            params["taper"] = self.taper
        return params


@dataclass(frozen=True)
class PowerTail(LineFunction):
    """``amplitude * |y|**a`` on ``|y| >= radius``: a power tail at infinity."""

    a: float
    radius: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ConfigurationError("PowerTail radius must be positive")

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.abs(np.asarray(y, dtype=float))
        out = np.zeros_like(y)
        mask = (y >= self.radius) & np.isfinite(y)
        out[mask] = self.amplitude * y[mask] ** self.a
        return out

    @property
    def support(self) -> tuple[float, float]:
        return -math.inf, math.inf

    @property
    def cuts(self) -> tuple[float, ...]:
        return -self.radius, self.radius

    @property
    def scale(self) -> float:
        return self.radius

    @property
    def is_even(self) -> bool:
        return True

    def dilate(self, lam: float) -> PowerTail:
        _check_lam(lam)
        return PowerTail(self.a, self.radius / lam, self.amplitude * lam**self.a)

    def scaled(self, factor: float) -> PowerTail:
        return PowerTail(self.a, self.radius, self.amplitude * factor)

    @property
    def params(self) -> dict[str, float]:
        return {"a": self.a, "radius": self.radius}

    def inverted(self, u: float) -> PowerCutoff:
        """Profile of ``y -> g(1/y) * |y|**(-2u)``; its L_(1/u) norm equals that of g."""
        return PowerCutoff(-self.a - 2.0 * u, 1.0 / self.radius, self.amplitude)


@dataclass(frozen=True)
class DilatedGaussian(LineFunction):
    """``amplitude * exp(-(lam*y)**2)``, cut where it drops below 1e-18."""

    lam: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        _check_lam(self.lam)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        lo, hi = self.support
        inside = (y >= lo) & (y <= hi)
        return np.where(inside, self.amplitude * np.exp(-((self.lam * y) ** 2)), 0.0)

    @property
    def support(self) -> tuple[float, float]:
        cut = GAUSSIAN_CUT / self.lam
        return -cut, cut

    @property
    def scale(self) -> float:
        return 1.0 / self.lam

    @property
    def is_even(self) -> bool:
        return True

    def dilate(self, lam: float) -> DilatedGaussian:
        _check_lam(lam)
        return DilatedGaussian(self.lam * lam, self.amplitude)

    def scaled(self, factor: float) -> DilatedGaussian:
        return DilatedGaussian(self.lam, self.amplitude * factor)

    @property
    def params(self) -> dict[str, float]:
        return {"dilation": self.lam}


@dataclass(frozen=True)
class Bump(LineFunction):
    """``amplitude * (1 - (y/radius)**2)**shape`` inside ``|y| < radius``."""

    shape: float = 1.0
    radius: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if not self.radius > 0 or not self.shape > 0:
            raise ConfigurationError("Bump needs positive shape and radius")

    def __call__(self, y: np.ndarray) -> np.ndarray:
        t = np.asarray(y, dtype=float) / self.radius
        base = np.clip(1.0 - t * t, 0.0, None)
        return self.amplitude * base**self.shape

    @property
    def support(self) -> tuple[float, float]:
        return -self.radius, self.radius

    @property
    def singularities(self) -> tuple[Singularity, ...]:
        return (-self.radius, self.shape), (self.radius, self.shape)

    @property
    def scale(self) -> float:
        return self.radius

    @property
    def is_even(self) -> bool:
        return True

    def dilate(self, lam: float) -> Bump:
        _check_lam(lam)
        return Bump(self.shape, self.radius / lam, self.amplitude)

    def scaled(self, factor: float) -> Bump:
        return Bump(self.shape, self.radius, self.amplitude * factor)

    @property
    def params(self) -> dict[str, float]:
        return {"shape": self.shape, "radius": self.radius}


@dataclass(frozen=True)
class Indicator(LineFunction):
    lo: float
    hi: float
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if not self.hi > self.lo:
            raise ConfigurationError("Indicator needs lo < hi")

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return np.where((y >= self.lo) & (y <= self.hi), self.amplitude, 0.0)

    @property
    def support(self) -> tuple[float, float]:
        return self.lo, self.hi

    @property
    def cuts(self) -> tuple[float, ...]:
        return self.lo, self.hi

    @property
    def scale(self) -> float:
        return self.hi - self.lo

    @property
    def is_even(self) -> bool:
        return self.lo == -self.hi

    def dilate(self, lam: float) -> Indicator:
        _check_lam(lam)
        return Indicator(self.lo / lam, self.hi / lam, self.amplitude)

    def scaled(self, factor: float) -> Indicator:
        return Indicator(self.lo, self.hi, self.amplitude * factor)

    @property
    def params(self) -> dict[str, float]:
        return {"lo": self.lo, "hi": self.hi}


@dataclass(frozen=True, eq=False)
class SampledLine(LineFunction):
    """Piecewise-linear interpolant of samples, zero outside the axis."""

    axis: np.ndarray
    values: np.ndarray
    amplitude: float = 1.0
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        axis = np.asarray(self.axis, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if axis.ndim != 1 or axis.shape != values.shape or axis.size < 2:
            raise ConfigurationError("SampledLine needs matching 1-D axis and values")
        if np.any(np.diff(axis) <= 0):
            raise ConfigurationError("SampledLine axis must be strictly increasing")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_key", (axis.tobytes(), values.tobytes(), self.amplitude))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SampledLine) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        return self.amplitude * np.interp(y, self.axis, self.values, left=0.0, right=0.0)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.axis[0]), float(self.axis[-1])

    @property
    def cuts(self) -> tuple[float, ...]:
        return tuple(float(x) for x in self.axis)

    @property
    def scale(self) -> float:
        return float(np.max(np.diff(self.axis)))

    def dilate(self, lam: float) -> SampledLine:
        _check_lam(lam)
        return SampledLine(self.axis / lam, self.values, self.amplitude)

    def scaled(self, factor: float) -> SampledLine:
        return SampledLine(self.axis, self.values, self.amplitude * factor)

    @property
    def params(self) -> dict[str, float]:
        return {"nodes": float(self.axis.size)}

    def sample(self, axis: np.ndarray) -> np.ndarray:
        return self(axis)


def power_floor(p: float, weight_exponent: float = 0.0) -> float:
    """Infimum of exponents a for which ``|y|**a * |y|**-w`` near 0 is in L_p and integrable."""
    floor = -1.0 / p if math.isfinite(p) else 0.0
    return max(floor, weight_exponent - 1.0)


def power_ceiling(p: float, weight_exponent: float = 0.0, order: float = 0.0) -> float:
    """Supremum of tail exponents a with ``|y|**a`` in L_p at infinity.

    The kernel integral of ``|y|**(a - w - order)`` must converge there as well.
    """
    ceiling = -1.0 / p if math.isfinite(p) else 0.0
    return min(ceiling, weight_exponent + order - 1.0)
