"""
nmcd command line application.
Builds the argument parser and dispatches to the subcommands.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from core.errors import NMCDError
from methods import load_methods
from utils.config import Settings, load_settings

from .commands import setup_commands

logger = logging.getLogger("NMCD.CLI")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    """Create the top-level parser with every subcommand registered."""
    parser = argparse.ArgumentParser(
        prog="nmcd",
        description="Nonparametric multiple change-point detection. "
                    "Change-points are 1-based: the first index of each new segment.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True
    setup_commands(subparsers, settings)
    return parser


def main(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    """
    Parse arguments, run the chosen subcommand and map failures to exit codes.

    Returns:
        0 on success, 2 on usage or input errors, 1 on anything unexpected
    """
    settings = settings or load_settings()
    if not load_methods():
        logger.critical("No detection methods registered")
        return EXIT_INTERNAL

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    logger.debug(f"Running command {args.command}")
    try:
        return args.handler(args)
    except (NMCDError, OSError) as e:
        logger.debug(f"{args.command} failed: {e}", exc_info=True)
        print(f"nmcd: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception(f"Unexpected error in {args.command}: {e}")
        print(f"nmcd: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
