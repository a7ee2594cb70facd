"""Tensor-grid sampled functions."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from anisonorm.exceptions import ConfigurationError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


def uniform_axis(radius: float, length: int) -> np.ndarray:
    """Uniform symmetric axis on [-radius, radius]."""
    return np.linspace(-radius, radius, length)


def graded_axis(radius: float, length: int, grading: float = 2.0) -> np.ndarray:
    """Symmetric axis on [-radius, radius] with nodes clustered near 0.

    Node k sits at ``radius * sign(t) * |t|**grading`` for t uniform in [-1, 1].
    """
    t = np.linspace(-1.0, 1.0, length)
    axis = radius * np.sign(t) * np.abs(t) ** grading
    if length % 2:
        axis[length // 2] = 0.0
    return axis


@dataclass(frozen=True)
class GridFunction:
    """Real or complex samples on a tensor product of strictly increasing axes.

    Axis 0 is x_1, the innermost variable of the mixed norm.
    """

    axes: tuple[np.ndarray, ...]
    values: np.ndarray
    truncation_radii: tuple[float, ...]

    def __post_init__(self) -> None:
        axes = tuple(_frozen(np.asarray(axis, dtype=float)) for axis in self.axes)
        values = np.asarray(self.values)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        if not axes:
            raise ConfigurationError("GridFunction needs at least one axis")
        for j, axis in enumerate(axes):
            if axis.ndim != 1 or axis.size < 2:
                raise ConfigurationError(f"axis {j + 1} must be 1-D with at least 2 nodes")
            if np.any(np.diff(axis) <= 0):
                raise ConfigurationError(f"axis {j + 1} must be strictly increasing")
        if values.shape != tuple(axis.size for axis in axes):
            raise ConfigurationError(
                f"values shape {values.shape} does not match axes "
                f"{tuple(axis.size for axis in axes)}"
            )
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("GridFunction samples must be finite")
        if len(self.truncation_radii) != len(axes):
            raise ConfigurationError("one truncation radius per axis is required")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(
            self, "truncation_radii", tuple(float(r) for r in self.truncation_radii)
        )

    @classmethod
    def from_samples(
        cls,
        axes: Sequence[np.ndarray],
        values: np.ndarray,
        truncation_radii: Sequence[float] | None = None,
    ) -> GridFunction:
        if truncation_radii is None:
            truncation_radii = [float(np.max(np.abs(axis))) for axis in axes]
        return cls(tuple(axes), values, tuple(truncation_radii))

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.axes)

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.values))

    def scaled(self, factor: complex) -> GridFunction:
        return GridFunction(self.axes, self.values * factor, self.truncation_radii)

    def with_values(self, values: np.ndarray) -> GridFunction:
        return GridFunction(self.axes, values, self.truncation_radii)
