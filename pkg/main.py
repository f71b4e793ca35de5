#!/usr/bin/env python3
"""
nmcd - Nonparametric multiple change-point detection
Entry point for the command line application.
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from typing import Optional, Sequence

from cli.app import main
from utils.config import load_settings
from utils.logging import setup_logging


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for nmcd; returns the process exit code."""
    settings = load_settings()
    logger = setup_logging(settings.log_level, settings.log_dir)

    # Log Python version and environment info
    logger.debug(f"Python version: {sys.version}")
    logger.debug(f"Running from: {os.path.abspath('.')}")

    return main(argv, settings)


if __name__ == "__main__":
    sys.exit(run())
