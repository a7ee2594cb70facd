"""
Run the invariant suite.

Usage:
    anisonorm verify --out out/
    anisonorm verify --config configs/riesz_gamma_half.conf --only oracles,spike

The seed comes from ``seed`` in the config ("default" without one). Exit status 3
when any check fails.
"""

from __future__ import annotations

import logging

from anisonorm.cli.context import RunContext
from anisonorm.repositories.csv_tables import check_table
from anisonorm.services.verification import run_suite

logger = logging.getLogger(__name__)

EXIT_FAILED = 3


def run(ctx: RunContext, only: list[str] | None = None) -> int:
    seed = ctx.config.seed if ctx.config else "default"
    results = run_suite(seed, only)
    ctx.tables().write("checks", "checks", check_table(results))
    for result in results:
        status = "pass" if result.passed else "FAIL"
        print(f"{result.name:<20} {status:<5} {result.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error("Failed checks: %s", ", ".join(failed))
        return EXIT_FAILED
    return 0
