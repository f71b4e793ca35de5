import logging

import pytest

from utils.config import Settings, load_settings
from utils.logging import setup_logging

ENV_NAMES = ("NMCD_LOG_LEVEL", "NMCD_LOG_DIR", "NMCD_N_JOBS", "NMCD_SEED")


@pytest.fixture
def clean_env(monkeypatch):
    for name in ENV_NAMES:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch


@pytest.fixture
def restore_root_logger():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        root.removeHandler(handler)
        handler.close()
    for handler in handlers:
        root.addHandler(handler)
    root.setLevel(level)


def test_defaults_without_config_files(clean_env, tmp_path):
    settings = load_settings(str(tmp_path))
    assert settings.log_level == "INFO"
    assert settings.n_jobs == 1
    assert settings.seed == 0
    assert settings.log_dir


def test_environment_overrides(clean_env, tmp_path):
    clean_env.setenv("NMCD_LOG_LEVEL", "DEBUG")
    clean_env.setenv("NMCD_N_JOBS", "4")
    clean_env.setenv("NMCD_SEED", "17")
    clean_env.setenv("NMCD_LOG_DIR", "")
    settings = load_settings(str(tmp_path))
    assert settings == Settings(log_level="DEBUG", log_dir=None, n_jobs=4, seed=17)


def test_bad_integers_fall_back(clean_env, tmp_path):
    clean_env.setenv("NMCD_N_JOBS", "many")
    assert load_settings(str(tmp_path)).n_jobs == 1


def test_env_file_is_read(clean_env, tmp_path):
    # Pre-set so monkeypatch removes the value load_dotenv writes.
    clean_env.setenv("NMCD_SEED", "")
    clean_env.delenv("NMCD_SEED")
    (tmp_path / ".env").write_text("NMCD_SEED=23\n", encoding="utf-8")
    assert load_settings(str(tmp_path)).seed == 23


def test_setup_logging_writes_a_log_file(tmp_path, restore_root_logger):
    logger = setup_logging("WARNING", str(tmp_path))
    assert logger.name == "NMCD"
    logging.getLogger("NMCD.Test").debug("file only")
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert "file only" in (tmp_path / "nmcd.log").read_text(encoding="utf-8")


def test_setup_logging_without_a_file(restore_root_logger):
    setup_logging("INFO", None)
    handlers = logging.getLogger().handlers
    assert len(handlers) == 1
    assert handlers[0].level == logging.INFO


def test_setup_logging_survives_an_unwritable_directory(tmp_path, restore_root_logger, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")
    setup_logging("WARNING", str(blocker / "logs"))
    handlers = logging.getLogger().handlers
    assert len(handlers) == 1
    assert "File logging disabled" in capsys.readouterr().err
