"""
Calibrate the envelope constant on one set of test functions and check the
Grand Lebesgue transfer bound on a disjoint holdout set.

Usage:
    anisonorm transfer --config configs/transfer_demo.conf --tolerance 0.05 --out out/

``transfer.psi`` is ``constant`` (psi = 1 on the grid box), ``spike`` (a single
exponent vector, ``transfer.spike`` or the block midpoints) or ``natural`` (the
natural psi of the calibration set). Exit status 3 when the worst holdout margin
exceeds 1 + tolerance.
"""

from __future__ import annotations

import logging

from anisonorm.cli.context import RunContext
from anisonorm.models.psi import PGrid, PsiFunction, PsiKind
from anisonorm.models.test_function import TestFunction
from anisonorm.repositories.csv_tables import transfer_table
from anisonorm.schemas.family import OperatorFamily
from anisonorm.services.estimator import interior_point, transfer_sets, verify_transfer
from anisonorm.services.norms import natural_psi

logger = logging.getLogger(__name__)

EXIT_MARGIN = 3


def _box(grid: PGrid) -> tuple[tuple[float, ...], tuple[float, ...]]:
    return (
        tuple(float(axis[0]) for axis in grid.axes),
        tuple(float(axis[-1]) for axis in grid.axes),
    )


def build_psi(
    kind: str,
    family: OperatorFamily,
    grid: PGrid,
    calibration: list[TestFunction],
    spike: tuple[float, ...] | None = None,
) -> PsiFunction:
    if kind == "spike":
        r = spike or tuple(interior_point(family, j) for j in range(family.l))
        return PsiFunction.spike_at(r)
    if kind == "natural":
        return natural_psi(calibration, grid)
    lower, upper = _box(grid)
    return PsiFunction(PsiKind.CONTINUOUS, lower, upper, lambda _p: 1.0, closed=True)


def run(ctx: RunContext) -> int:
    config = ctx.require_config()
    family = ctx.family()
    grid = ctx.pgrid(family)
    spec = config.transfer
    tolerance = spec.tolerance if ctx.tolerance_override is None else ctx.tolerance_override

    points = (
        [spec.spike or tuple(interior_point(family, j) for j in range(family.l))]
        if spec.psi == "spike"
        else list(grid.points())
    )
    calibration, holdout = transfer_sets(family, points, spec.calibration, spec.holdout)
    psi = build_psi(spec.psi, family, grid, calibration, spec.spike)
    report = verify_transfer(family, psi, calibration, holdout, grid, tolerance)

    ctx.tables().write("transfer", "transfer", transfer_table(report))
    status = "pass" if report.passed else "FAIL"
    print(
        f"constant {report.constant:.6g}, worst margin {report.worst:.6g} "
        f"(tolerance {tolerance:g}): {status}"
    )
    return 0 if report.passed else EXIT_MARGIN
