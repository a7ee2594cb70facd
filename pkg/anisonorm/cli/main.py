"""
Command-line entry point.

Usage:
    anisonorm exponents --config configs/riesz_gamma_half.conf
    anisonorm apply     --config configs/riesz_gamma_half.conf [--input f.angf]
    anisonorm scan      --config configs/riesz_gamma_half.conf --threads 4
    anisonorm transfer  --config configs/transfer_demo.conf --tolerance 0.05
    anisonorm verify    [--config FILE] [--only oracles,spike]

Common flags: --config, --out, --threads (fallback ANISONORM_THREADS), --tolerance.
Exit status: 0 success, 1 configuration error, 2 admissibility violation,
3 numeric failure (including failed checks and transfer margins).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from collections.abc import Iterator, Sequence
from contextlib import contextmanager

import sentry_sdk
from pydantic import ValidationError

from anisonorm import __version__
from anisonorm.cli import apply, exponents, scan, transfer, verify
from anisonorm.cli.config_file import load_config
from anisonorm.cli.context import RunContext
from anisonorm.config import get_settings
from anisonorm.exceptions import (
    AdmissibilityError,
    AnisonormError,
    ConfigurationError,
    InadmissibleP,
    NumericalError,
)
from anisonorm.logging_config import setup_logging
from anisonorm.sentry import init_sentry
from anisonorm.services.operators import clear_output_cache

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_ADMISSIBILITY = 2
EXIT_NUMERIC = 3

COMMANDS = {
    "exponents": ("Endpoint table and sampled envelope", exponents.run),
    "apply": ("Apply the tensor operator to a grid function", apply.run),
    "scan": ("Lower-bound curve and blow-up fit", scan.run),
    "transfer": ("Calibrate and check the Grand Lebesgue transfer bound", transfer.run),
    "verify": ("Run the invariant suite", verify.run),
}


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="anisonorm",
        description="Anisotropic Grand Lebesgue norms and weighted Riesz/Fourier operators.",
    )
    parser.add_argument("--version", action="version", version=f"anisonorm {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for name, (description, _) in COMMANDS.items():
        sub = subparsers.add_parser(name, help=description, description=description)
        sub.add_argument("--config", help="Key-value experiment file", default=None)
        sub.add_argument("--out", help="Output directory (default: config output or 'out')")
        sub.add_argument("--threads", type=int, default=None, help="Concurrent searches")
        sub.add_argument(
            "--tolerance",
            type=float,
            default=None,
            help="Transfer margin slack for 'transfer', quadrature tolerance otherwise",
        )
        sub.add_argument("--log-level", default=None, help="Override ANISONORM_LOG_LEVEL")
        if name == "apply":
            sub.add_argument("--input", help="GridFunction container (.angf)", default=None)
        if name == "verify":
            sub.add_argument("--only", help="Comma-separated check names", default=None)
    return parser


@contextmanager
def quadrature_tolerance(value: float | None) -> Iterator[None]:
    """Run with ANISONORM_TOLERANCE set to ``value``; restore afterwards."""
    if value is None:
        yield
        return
    previous = os.environ.get("ANISONORM_TOLERANCE")
    os.environ["ANISONORM_TOLERANCE"] = repr(value)
    get_settings.cache_clear()
    clear_output_cache()
    try:
        try:
            get_settings()
        except ValidationError as e:
            raise ConfigurationError(f"invalid tolerance {value}: {e.errors()[0]['msg']}") from e
        yield
    finally:
        if previous is None:
            os.environ.pop("ANISONORM_TOLERANCE", None)
        else:
            os.environ["ANISONORM_TOLERANCE"] = previous
        get_settings.cache_clear()
        clear_output_cache()


def exit_code(error: AnisonormError) -> int:
    if isinstance(error, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(error, AdmissibilityError):
        return EXIT_ADMISSIBILITY
    if isinstance(error, NumericalError):
        return EXIT_NUMERIC
    return EXIT_CONFIG


def _diagnostic(error: AnisonormError) -> str:
    message = f"{type(error).__name__}: {error}"
    if isinstance(error, InadmissibleP) and error.conditions:
        message += f" [{', '.join(error.conditions)}]"
    return message


def _dispatch(args: argparse.Namespace) -> int:
    if args.threads is not None and args.threads < 1:
        raise ConfigurationError("--threads must be at least 1")
    config = load_config(args.config) if args.config else None
    ctx = RunContext.resolve(
        config,
        out=args.out,
        threads=args.threads,
        tolerance=args.tolerance,
        input_path=getattr(args, "input", None),
    )
    quadrature = ctx.tolerance_override if args.command != "transfer" else None
    if quadrature is None and config is not None:
        quadrature = config.tolerance
    with quadrature_tolerance(quadrature):
        if args.command == "verify":
            only = [name.strip() for name in args.only.split(",")] if args.only else None
            return verify.run(ctx, only)
        _, command = COMMANDS[args.command]
        return command(ctx)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    init_sentry()
    logger.debug("anisonorm %s: %s", __version__, args.command)
    try:
        return _dispatch(args)
    except AnisonormError as e:
        code = exit_code(e)
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"error: {_diagnostic(e)}", file=sys.stderr)
        return code
    except Exception as e:
        sentry_sdk.capture_exception(e)
        raise


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
