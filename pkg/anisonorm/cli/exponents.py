"""
Endpoint table, blow-up exponents and a sampled envelope for a family.

Usage:
    anisonorm exponents --config configs/riesz_gamma_half.conf --out out/
"""

from __future__ import annotations

import logging

from anisonorm.cli.context import RunContext
from anisonorm.repositories.csv_tables import envelope_table, exponent_table, format_cell
from anisonorm.schemas.family import FamilyKind
from anisonorm.services.exponent_algebra import (
    admissible,
    endpoints,
    envelope,
    equal_exponent_condition,
)

logger = logging.getLogger(__name__)


def run(ctx: RunContext) -> int:
    family = ctx.family()
    ranges = endpoints(family)
    columns, rows = exponent_table(ranges)
    print(f"{family.kind} with {family.l} block(s)")
    print("  ".join(columns))
    for row in rows:
        print("  ".join(format_cell(cell) for cell in row))
    if family.kind in (FamilyKind.FOURIER_WEIGHTED, FamilyKind.FOURIER_SLOW_VARY):
        print(f"equal p gives equal q: {format_cell(equal_exponent_condition(family))}")

    samples = []
    for p in ctx.pgrid(family).points():
        report = admissible(family, p)
        if not report.passed:
            logger.debug("Skipping inadmissible grid point %s: %s", p, report.violations)
            continue
        assert report.q is not None
        value = envelope(family, p)
        samples.append((p, report.q, value.lower_shape, value.upper_shape))

    tables = ctx.tables()
    tables.write("exponents", "endpoints", (columns, rows))
    tables.write("envelope", "envelope", envelope_table(samples))
    return 0
