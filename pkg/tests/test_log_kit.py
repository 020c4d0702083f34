"""
Tests for console logging and the JSON error record
"""

import json
import logging

from lfsm_common.exceptions import EstimationError
from lfsm_common.log_kit import (
    DIVIDER_WIDTH,
    console_level,
    divider,
    emit_error_record,
    get_display_width,
    get_logger,
    logger,
)


def test_levels_and_dividers(capsys):
    divider("LFSM Estimate")
    logger.debug("alpha regression drops grid points [19.0, 20.0]")
    logger.info("Input: prices.csv, 2001 values")
    logger.ok("Estimate written")
    logger.warning("alpha=0.612, H=0.150: no decomposition at d = 7")
    divider("Study cells", sep="-", with_timestamp=False)
    # DEBUG lines are printed as they are; the other levels go through the stream handler
    lines = capsys.readouterr().out.splitlines()
    assert "LFSM Estimate" in lines[0]
    assert get_display_width(lines[0]) >= DIVIDER_WIDTH
    assert lines[1] == "alpha regression drops grid points [19.0, 20.0]"
    assert lines[-1].startswith("-" * 4) and " Study cells " in lines[-1]


def test_named_loggers_are_shared():
    assert get_logger("lfsm_test") is get_logger("lfsm_test")
    assert get_display_width("abc") == 3
    assert get_display_width("估计") > 2


def test_console_level(monkeypatch):
    monkeypatch.setenv("LFSM_LOG_LEVEL", "ok")
    assert console_level() == 25
    monkeypatch.setenv("LFSM_LOG_LEVEL", "warning")
    assert console_level() == logging.WARNING
    monkeypatch.setenv("LFSM_LOG_LEVEL", "chatty")
    assert console_level() == logging.DEBUG
    monkeypatch.delenv("LFSM_LOG_LEVEL")
    assert console_level() == logging.DEBUG


def test_error_record(capsys):
    error = EstimationError("fewer increments than the largest lag", {"required": 32, "available": 20})
    emit_error_record(error.to_record())
    record = json.loads(capsys.readouterr().err.strip())
    assert record == {
        "error": "EstimationError",
        "message": "fewer increments than the largest lag",
        "exit_code": 2,
        "details": {"required": 32, "available": 20},
    }
