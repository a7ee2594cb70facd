"""Command-line front-end: ``anisonorm <subcommand> --config FILE``."""
