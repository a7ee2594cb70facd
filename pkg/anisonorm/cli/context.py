"""Resolved run options shared by the subcommands."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from anisonorm.cli.config_file import config_hash
from anisonorm.config import get_settings
from anisonorm.exceptions import ConfigurationError, InadmissibleP
from anisonorm.models.psi import PGrid
from anisonorm.repositories import CsvTableRepository, GridContainerRepository
from anisonorm.schemas.experiment import ExperimentConfig
from anisonorm.schemas.family import OperatorFamily
from anisonorm.services.exponent_algebra import endpoints


@dataclass(frozen=True)
class RunContext:
    """CLI flags override the config file, which overrides settings.

    ``tolerance`` is the quadrature tolerance from the config (or settings);
    ``tolerance_override`` is the raw ``--tolerance`` flag, whose meaning each
    subcommand decides.
    """

    config: ExperimentConfig | None
    out_dir: Path
    threads: int
    tolerance: float
    input_path: str | None = None
    tolerance_override: float | None = None

    @classmethod
    def resolve(
        cls,
        config: ExperimentConfig | None,
        out: str | None = None,
        threads: int | None = None,
        tolerance: float | None = None,
        input_path: str | None = None,
    ) -> RunContext:
        settings = get_settings()
        out_dir = out or (config.output if config and config.output else settings.output_dir)
        return cls(
            config=config,
            out_dir=Path(out_dir),
            threads=threads or settings.threads,
            tolerance=config.tolerance if config else settings.tolerance,
            input_path=input_path,
            tolerance_override=tolerance,
        )

    @property
    def config_hash(self) -> str:
        return config_hash(self.config) if self.config else "none"

    def require_config(self) -> ExperimentConfig:
        if self.config is None:
            raise ConfigurationError("this command needs --config")
        return self.config

    def family(self) -> OperatorFamily:
        return self.require_config().operator_family()

    def tables(self) -> CsvTableRepository:
        return CsvTableRepository(self.out_dir, self.config_hash)

    def containers(self) -> GridContainerRepository:
        return GridContainerRepository(self.out_dir)

    def pgrid(self, family: OperatorFamily) -> PGrid:
        """Configured exponent grid; the box defaults to the effective ranges."""
        spec = self.require_config().pgrid
        ranges = endpoints(family)
        for j, r in enumerate(ranges):
            if r.empty:
                raise InadmissibleP(
                    f"block {j + 1} has an empty admissible range",
                    conditions=[f"block {j + 1}: empty_range"],
                )
        lower = spec.lower or tuple(r.p_low for r in ranges)
        upper = spec.upper or tuple(r.p_high for r in ranges)
        return PGrid.build(lower, upper, spec.points, spec.offset, spec.infinite_span)
