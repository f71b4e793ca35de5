"""
Runtime settings for nmcd.

Settings come from the environment, optionally seeded from config/.env
(or config/sample.env when no .env exists yet). Algorithm tuning is not
configured here; it travels through DetectConfig and the CLI flags.
"""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from utils.logging import DEFAULT_LOG_DIR

logger = logging.getLogger("NMCD.Config")

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "config")


@dataclass(frozen=True)
class Settings:
    """Process-wide settings resolved from the environment."""

    log_level: str = "INFO"
    log_dir: Optional[str] = DEFAULT_LOG_DIR
    n_jobs: int = 1
    seed: int = 0


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring non-integer {name}={raw!r}; using {default}")
        return default


def load_settings(config_dir: str = CONFIG_DIR) -> Settings:
    """
    Load environment files and build the Settings object.

    Args:
        config_dir: Directory holding .env / sample.env

    Returns:
        The resolved Settings
    """
    config_path = os.path.join(config_dir, ".env")
    sample_path = os.path.join(config_dir, "sample.env")
    if os.path.exists(config_path):
        load_dotenv(config_path)
    elif os.path.exists(sample_path):
        load_dotenv(sample_path)
        logger.debug("Using sample.env for configuration")

    log_dir = os.getenv("NMCD_LOG_DIR")
    if log_dir is None:
        log_dir = DEFAULT_LOG_DIR
    elif log_dir.strip() == "":
        log_dir = None

    return Settings(
        log_level=os.getenv("NMCD_LOG_LEVEL", "INFO"),
        log_dir=log_dir,
        n_jobs=_int_env("NMCD_N_JOBS", 1),
        seed=_int_env("NMCD_SEED", 0),
    )
