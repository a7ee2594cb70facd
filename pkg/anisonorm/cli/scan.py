"""
Lower-bound curve of the operator norm over the configured exponent grid.

Usage:
    anisonorm scan --config configs/riesz_gamma_half.conf --threads 4 --out out/

Writes ``k_curve.csv``; with ``scan.blowup = true`` also the epsilon ladder toward
``scan.endpoint`` of ``scan.block`` (``blowup_curve.csv``) and its fit
(``blowup.csv``). Interior Riesz families additionally get the growth factors of
their curve and the full-space curve over the full-space ladder (``contrast.csv``);
toward the lower endpoint the full-space curve is searched over power tails.
"""

from __future__ import annotations

import logging
import math

from anisonorm.cli.context import RunContext
from anisonorm.exceptions import InadmissibleP
from anisonorm.repositories.csv_tables import blowup_table, k_curve_table
from anisonorm.schemas.family import FamilyKind, OperatorFamily
from anisonorm.services.estimator import (
    calibrate_envelope,
    endpoint_contrast,
    endpoint_curves,
    scan_blowup,
    scan_k_curve,
)
from anisonorm.services.exponent_algebra import block_range

logger = logging.getLogger(__name__)


def _contrast(ctx: RunContext, family: OperatorFamily) -> None:
    config = ctx.require_config()
    try:
        inside, outside = endpoint_curves(
            family,
            config.test_family,
            config.scan.block,
            config.scan.endpoint,
            config.scan.ladder,
            config.scan.start,
            ctx.threads,
        )
    except InadmissibleP:
        logger.warning("Full-space ladder leaves the interior range; no contrast")
        return
    growth_inside, growth_outside = endpoint_contrast(inside, outside)
    print(f"growth factor interior {growth_inside:.6g}, full space {growth_outside:.6g}")
    columns = ["curve", "growth_factor", "points"]
    rows = [["interior", growth_inside, len(inside)], ["full", growth_outside, len(outside)]]
    ctx.tables().write("contrast", "endpoint_contrast", (columns, rows))


def run(ctx: RunContext) -> int:
    config = ctx.require_config()
    family = ctx.family()
    tables = ctx.tables()

    curve = scan_k_curve(family, ctx.pgrid(family), config.test_family, ctx.threads)
    tables.write("k_curve", "k_curve", k_curve_table(curve))
    degenerate = sum(k.degenerate for k in curve)
    if degenerate:
        logger.warning("%d of %d searches were degenerate", degenerate, len(curve))
    constant = calibrate_envelope(curve, family)
    print(f"{len(curve)} points, calibrated envelope constant {constant:.6g}")

    if not config.scan.blowup:
        return 0
    rng = block_range(family, config.scan.block - 1)
    target = rng.p_high if config.scan.endpoint == "plus" else rng.p_low
    if math.isinf(target):
        logger.warning(
            "Block %d endpoint %s is infinite; skipping blow-up scan",
            config.scan.block,
            config.scan.endpoint,
        )
        return 0
    ladder, fit = scan_blowup(
        family,
        config.test_family,
        config.scan.block,
        config.scan.endpoint,
        config.scan.ladder,
        config.scan.start,
        ctx.threads,
    )
    tables.write("blowup_curve", "k_curve", k_curve_table(ladder))
    tables.write("blowup", "blowup", blowup_table([fit]))
    expected = "n/a" if fit.expected_slope is None else f"{fit.expected_slope:.4f}"
    print(f"{fit.label}: slope {fit.fitted_slope:.4f} (expected {expected})")

    if family.kind is FamilyKind.RIESZ_INTERIOR:
        _contrast(ctx, family)
    return 0
