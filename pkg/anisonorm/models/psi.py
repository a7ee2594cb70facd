"""psi-functions generating Grand Lebesgue norms, and exponent grids."""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from anisonorm.exceptions import ConfigurationError, EmptyGrid

Exponents = tuple[float, ...]


class PsiKind(StrEnum):
    CONTINUOUS = "continuous"
    SPIKE = "spike"
    NATURAL = "natural"


@dataclass(frozen=True)
class PsiFunction:
    """psi on an open box ``lower < p < upper``; +inf outside the support.

    A spike at r evaluates to ``height`` at r and +inf elsewhere, so the Grand
    Lebesgue norm collapses to the single mixed norm at r (divided by height).
    Natural psi functions are finite on their closed tabulated box.
    """

    kind: PsiKind
    lower: Exponents
    upper: Exponents
    evaluator: Callable[[Exponents], float] | None = field(default=None, compare=False)
    spike: Exponents | None = None
    height: float = 1.0
    closed: bool = False

    @classmethod
    def continuous(
        cls,
        evaluator: Callable[[Exponents], float],
        lower: Sequence[float],
        upper: Sequence[float],
    ) -> PsiFunction:
        return cls(PsiKind.CONTINUOUS, tuple(lower), tuple(upper), evaluator)

    @classmethod
    def constant(cls, value: float, lower: Sequence[float], upper: Sequence[float]) -> PsiFunction:
        if value <= 0:
            raise ConfigurationError("constant psi must be positive")
        return cls.continuous(lambda _p: value, lower, upper)

    @classmethod
    def spike_at(cls, r: Sequence[float], height: float = 1.0) -> PsiFunction:
        r = tuple(float(x) for x in r)
        return cls(PsiKind.SPIKE, r, r, spike=r, height=height, closed=True)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.lower)

    def contains(self, p: Sequence[float]) -> bool:
        if self.kind is PsiKind.SPIKE:
            return tuple(p) == self.spike
        for pj, lo, hi in zip(p, self.lower, self.upper, strict=True):
            if self.closed and not lo <= pj <= hi:
                return False
            if not self.closed and not lo < pj < hi:
                return False
        return True

    def __call__(self, p: Sequence[float]) -> float:
        p = tuple(p)
        if not self.contains(p):
            return math.inf
        if self.kind is PsiKind.SPIKE:
            return self.height
        assert self.evaluator is not None
        return float(self.evaluator(p))

    def infimum(self, grid: PGrid) -> float:
        """Smallest value on a grid; must be positive for a valid psi."""
        values = [self(p) for p in grid.points()]
        if not values:
            raise EmptyGrid("psi infimum over an empty grid")
        smallest = min(values)
        if not smallest > 0:
            raise ConfigurationError(f"psi must be positive on its support (min {smallest})")
        return smallest


def _axis_points(lower: float, upper: float, points: int, offset: float, span: float) -> np.ndarray:
    if math.isinf(upper):
        return lower + np.geomspace(offset, span, max(points, 2))
    gap = upper - lower
    if gap <= 2 * offset:
        raise EmptyGrid(f"interval ({lower}, {upper}) is narrower than twice the offset")
    half = max(2, math.ceil(points / 2))
    distances = np.geomspace(offset, gap / 2, half)
    return np.unique(np.concatenate([lower + distances, upper - distances]))


@dataclass(frozen=True)
class PGrid:
    """Tensor grid of exponent vectors, log-spaced toward the support boundary."""

    axes: tuple[np.ndarray, ...]
    densification: int = 1

    @classmethod
    def build(
        cls,
        lower: Sequence[float],
        upper: Sequence[float],
        points: int = 8,
        offset: float = 1e-3,
        infinite_span: float = 8.0,
    ) -> PGrid:
        axes = tuple(
            _axis_points(lo, hi, points, offset, infinite_span)
            for lo, hi in zip(lower, upper, strict=True)
        )
        return cls(axes)

    @classmethod
    def from_points(cls, axes: Sequence[Sequence[float]]) -> PGrid:
        return cls(tuple(np.asarray(sorted(axis), dtype=float) for axis in axes))

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.axes)

    @property
    def size(self) -> int:
        return math.prod(axis.size for axis in self.axes)

    def points(self) -> Iterator[Exponents]:
        for combo in itertools.product(*self.axes):
            yield tuple(float(x) for x in combo)

    def refine(self) -> PGrid:
        """Insert midpoints between neighbours; the refined grid contains this one."""
        refined = []
        for axis in self.axes:
            if axis.size < 2:
                refined.append(axis)
                continue
            mids = 0.5 * (axis[:-1] + axis[1:])
            refined.append(np.sort(np.concatenate([axis, mids])))
        return PGrid(tuple(refined), self.densification * 2)

    def inside(self, psi: PsiFunction) -> bool:
        return all(psi.contains(p) for p in self.points())
