"""Deterministic CSV tables.

Every file starts with ``# config_hash=<sha256>`` and ``# kind=<table>`` comment
lines, then a header row; numbers carry 12 significant digits. No timestamps, so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path

from anisonorm.exceptions import ContainerFormatError
from anisonorm.repositories.base import FileRepository
from anisonorm.schemas.estimates import BlowupFit, CheckResult, KEstimate, TransferReport
from anisonorm.schemas.exponents import BlockRange

logger = logging.getLogger(__name__)

Cell = float | int | str | bool | None
Table = tuple[list[str], list[list[Cell]]]


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.12g}"
    return str(value)


def render(columns: Sequence[str], rows: Iterable[Sequence[Cell]], meta: dict[str, str]) -> str:
    buffer = io.StringIO()
    for key, value in meta.items():
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(cell) for cell in row])
    return buffer.getvalue()


class CsvTableRepository(FileRepository):
    """Writes tables under one output directory, tagged with the config hash."""

    suffix = ".csv"

    def __init__(self, root: str | Path, config_hash: str):
        super().__init__(root)
        self.config_hash = config_hash

    def write(self, name: str, kind: str, table: Table) -> Path:
        columns, rows = table
        path = self.path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        meta = {"config_hash": self.config_hash, "kind": kind}
        path.write_text(render(columns, rows, meta))
        logger.info("Wrote %s (%d rows)", path, len(rows))
        return path

    def read(self, name: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
        path = self.path(name)
        meta: dict[str, str] = {}
        body: list[str] = []
        for line in path.read_text().splitlines():
            if line.startswith("# ") and not body:
                key, _, value = line[2:].partition("=")
                meta[key] = value
            else:
                body.append(line)
        if not body:
            raise ContainerFormatError(f"{path} has no header row")
        header, *rows = list(csv.reader(body))
        return meta, header, rows


def exponent_table(ranges: Sequence[BlockRange]) -> Table:
    columns = [
        "block", "p_minus", "p_plus", "q_minus", "q_plus", "kappa",
        "p_low", "p_high", "q_low", "q_high", "empty",
    ]  # fmt: skip
    rows = [
        [
            j + 1, r.p_minus, r.p_plus, r.q_minus, r.q_plus, r.kappa,
            r.p_low, r.p_high, r.q_low, r.q_high, r.empty,
        ]  # fmt: skip
        for j, r in enumerate(ranges)
    ]
    return columns, rows


EnvelopeSample = tuple[Sequence[float], Sequence[float], float, float]


def envelope_table(samples: Sequence[EnvelopeSample]) -> Table:
    """Rows (p, q, lower_shape, upper_shape)."""
    l = len(samples[0][0]) if samples else 0  # noqa: E741
    columns = [f"p_{j + 1}" for j in range(l)] + [f"q_{j + 1}" for j in range(l)]
    columns += ["lower_shape", "upper_shape"]
    rows = [[*p, *q, lower, upper] for p, q, lower, upper in samples]
    return columns, rows


def k_curve_table(curve: Sequence[KEstimate]) -> Table:
    l = len(curve[0].p) if curve else 0  # noqa: E741
    witness_keys = sorted({key for k in curve for key in k.witness})
    columns = [f"p_{j + 1}" for j in range(l)] + [f"q_{j + 1}" for j in range(l)]
    columns += ["lower_bound", "degenerate", *witness_keys, "tolerance"]
    rows = [
        [*k.p, *k.q, k.lower_bound, k.degenerate]
        + [k.witness.get(key) for key in witness_keys]
        + [k.quadrature_tolerance]
        for k in curve
    ]
    return columns, rows


def blowup_table(fits: Sequence[BlowupFit]) -> Table:
    columns = ["block", "endpoint", "side", "slope", "expected_slope", "residual", "samples"]
    rows = [
        [f.block, f.endpoint, f.side, f.fitted_slope, f.expected_slope, f.residual, len(f.samples)]
        for f in fits
    ]
    return columns, rows


def transfer_table(report: TransferReport) -> Table:
    keys = sorted({key for params in report.holdout for key in params})
    columns = ["holdout", "margin", *keys]
    rows = [
        [i + 1, margin] + [params.get(key) for key in keys]
        for i, (margin, params) in enumerate(zip(report.margins, report.holdout, strict=True))
    ]
    return columns, rows


def check_table(results: Sequence[CheckResult]) -> Table:
    columns = ["check", "passed", "worst", "detail"]
    return columns, [[r.name, r.passed, r.worst, r.detail] for r in results]
