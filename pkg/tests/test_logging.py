"""Tests for logging setup."""

import logging

from anisonorm.logging_config import get_logger, setup_logging


def test_setup_logging_installs_single_handler(monkeypatch):
    monkeypatch.setenv("ANISONORM_LOG_LEVEL", "debug")
    setup_logging()
    setup_logging()
    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert root.level == logging.DEBUG
    assert logging.getLogger("asyncio").level == logging.WARNING


def test_setup_logging_level_override():
    setup_logging("warning")
    assert logging.getLogger().level == logging.WARNING


def test_get_logger_returns_named_logger():
    assert get_logger("anisonorm.services").name == "anisonorm.services"
