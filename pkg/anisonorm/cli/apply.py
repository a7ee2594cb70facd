"""
Apply a family's tensor operator to a stored grid function.

Usage:
    anisonorm apply --config configs/riesz_gamma_half.conf --input f.angf --out out/

Without an input the unit Gaussian sampled on the configured grid is used.
Point coordinates (``apply.point``) are added to the output axes so the value
printed there is computed, not interpolated.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from anisonorm.cli.context import RunContext
from anisonorm.exceptions import ConfigurationError
from anisonorm.models.grid import GridFunction, graded_axis, uniform_axis
from anisonorm.models.profiles import DilatedGaussian
from anisonorm.models.test_function import TestFunction
from anisonorm.repositories import GridContainerRepository
from anisonorm.services.operators import (
    BlockOperatorSpec,
    apply_tensor_operator,
    default_output_axis,
)

logger = logging.getLogger(__name__)


def default_input(ctx: RunContext) -> GridFunction:
    config = ctx.require_config()
    axes = [
        graded_axis(radius, length, config.grid.grading)
        if config.grid.grading > 1.0
        else uniform_axis(radius, length)
        for length, radius in zip(config.axis_lengths(), config.axis_radii(), strict=True)
    ]
    gaussian = TestFunction(tuple(DilatedGaussian(1.0) for _ in axes))
    return gaussian.to_grid(axes)


def run(ctx: RunContext) -> int:
    config = ctx.require_config()
    family = ctx.family()
    containers = ctx.containers()
    path = ctx.input_path or config.apply.input
    f = GridContainerRepository(Path.cwd()).load(path) if path else default_input(ctx)
    if f.l != family.l:
        raise ConfigurationError(f"input has {f.l} axes, family has {family.l} blocks")

    point = config.apply.point
    output_axes = None
    if point is not None:
        if len(point) != family.l:
            raise ConfigurationError(f"apply.point needs {family.l} coordinates")
        output_axes = []
        for j, (axis, x) in enumerate(zip(f.axes, point, strict=True)):
            spec = BlockOperatorSpec.from_family(family, j)
            if not spec.contains(np.asarray([x]))[0]:
                raise ConfigurationError(f"apply.point {x} lies outside block {j + 1}")
            output_axes.append(np.union1d(default_output_axis(spec, axis), [x]))

    out = apply_tensor_operator(family, f, output_axes)
    saved = containers.save(
        "apply_output", out, family=family, tolerance=ctx.tolerance, source=path or "gaussian"
    )
    print(f"wrote {saved}")
    if point is not None:
        pairs = zip(out.axes, point, strict=True)
        index = tuple(int(np.searchsorted(axis, x)) for axis, x in pairs)
        value = out.values[index]
        print(f"Tf{tuple(point)} = {value:.12g}")
    return 0
