"""
Logging configuration for nmcd.
Sets up console and file logging with appropriate formatting.
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Optional

DEFAULT_LOG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "logs")


def setup_logging(level: str = "INFO", log_dir: Optional[str] = DEFAULT_LOG_DIR) -> logging.Logger:
    """
    Configure the logging system for nmcd.

    Console output goes to stderr so that JSON and CSV written to stdout
    stay machine readable.

    Args:
        level: Console log level name (DEBUG, INFO, WARNING, ...)
        log_dir: Directory for the rotating log file, or None/"" to disable file logging.
            An unwritable directory falls back to console-only logging.

    Returns:
        The "NMCD" logger
    """
    console_formatter = logging.Formatter('%(levelname)s - %(name)s - %(message)s')
    file_formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, str(level).upper(), logging.INFO))
    console_handler.setFormatter(console_formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(logging.DEBUG)

    # Remove existing handlers to avoid duplicates
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    root_logger.addHandler(console_handler)

    file_error = None
    if log_dir:
        try:
            os.makedirs(log_dir, exist_ok=True)
            file_handler = RotatingFileHandler(
                os.path.join(log_dir, "nmcd.log"),
                maxBytes=5*1024*1024,  # 5 MB
                backupCount=3,
                encoding="utf-8",
            )
        except OSError as exc:
            file_error = exc
        else:
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(file_formatter)
            root_logger.addHandler(file_handler)

    # joblib workers are chatty at debug level
    logging.getLogger('joblib').setLevel(logging.WARNING)

    nmcd_logger = logging.getLogger("NMCD")
    nmcd_logger.setLevel(logging.DEBUG)

    if file_error is not None:
        nmcd_logger.warning(f"File logging disabled, cannot write to {log_dir}: {file_error}")

    return nmcd_logger
