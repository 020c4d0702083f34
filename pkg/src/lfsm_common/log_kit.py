"""
Console logging for the LFSM toolkit

Task progress goes to stdout through one shared logger with an extra OK level for finished
stages. Failures that scripts need to parse go to stderr as a single JSON line.

LFSM_LOG_LEVEL (DEBUG, INFO, OK, WARNING, ERROR) sets the console threshold; DEBUG is the default.
"""

import json
import logging
import os
import sys
import time
import unicodedata
from datetime import datetime
from pathlib import Path

from colorama import Fore, Style, init

from lfsm_common.constants import LFSM_LOG_LEVEL_ENV

init(autoreset=True)

current_script = Path(sys.argv[0]).stem

# ====================================================================================================
# ** OK level **
# Sits between INFO and WARNING: a solve, a scan or a report write that completed
# ====================================================================================================
OK_LEVEL = 25
logging.addLevelName(OK_LEVEL, "OK")


def ok(self, message, *args, **kwargs):
    if self.isEnabledFor(OK_LEVEL):
        self._log(OK_LEVEL, message, args, **kwargs)


logging.Logger.ok = ok

DIVIDER_WIDTH = 82
# terminal columns taken by a wide (CJK, emoji) character
WIDE_CHAR_WIDTH = 1.685


def get_display_width(text: str) -> int:
    """Terminal columns taken by text; wide characters count WIDE_CHAR_WIDTH."""
    width = sum(WIDE_CHAR_WIDTH if unicodedata.east_asian_width(c) in ("F", "W", "A") else 1 for c in text)
    return int(width)


def console_level() -> int:
    """Threshold from LFSM_LOG_LEVEL; unknown names fall back to DEBUG."""
    name = os.getenv(LFSM_LOG_LEVEL_ENV, "DEBUG").strip().upper()
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else logging.DEBUG


# ====================================================================================================
# ** Console logger **
# - LfsmFormatter(): level colour and marker in front of the message
# - LfsmConsoleHandler(): DEBUG lines (tables, dividers) are printed as they are
# - LfsmLogger(): one configured logger per name, shared by every module that asks for it
# ====================================================================================================
class LfsmFormatter(logging.Formatter):
    FORMATS = {
        logging.DEBUG: ("", ""),
        logging.INFO: (Fore.WHITE, "🌀 "),
        logging.WARNING: (Fore.YELLOW, "🔔 "),
        logging.ERROR: (Fore.RED, "❌ "),
        logging.CRITICAL: (Fore.RED + Style.BRIGHT, "⭕ "),
        OK_LEVEL: (Fore.GREEN, "✅ "),
    }

    def format(self, record):
        color, prefix = self.FORMATS.get(record.levelno, (Fore.WHITE, ""))
        record.msg = f"{color}{prefix}{record.msg}{Style.RESET_ALL}"
        return super().format(record)


class LfsmConsoleHandler(logging.StreamHandler):
    def emit(self, record):
        if record.levelno == logging.DEBUG:
            print(record.msg, flush=True)
        else:
            super().emit(record)


class LfsmLogger:
    _instance = dict()

    def __new__(cls, name="lfsm"):
        if cls._instance.get(name) is None:
            cls._instance[name] = super(LfsmLogger, cls).__new__(cls)
            cls._instance[name]._initialize_logger(name)
        return cls._instance[name]

    def _initialize_logger(self, name):
        self.logger = logging.getLogger(name)
        self.logger.setLevel(console_level())
        self.logger.propagate = False

        if self.logger.hasHandlers():
            self.logger.handlers.clear()

        console_handler = LfsmConsoleHandler(sys.stdout)
        console_handler.setFormatter(LfsmFormatter("%(message)s"))
        self.logger.addHandler(console_handler)


def get_logger(name=None):
    if name is None:
        name = current_script
    return LfsmLogger(name).logger


def divider(name="", sep="=", _logger=None, with_timestamp=True) -> None:
    """
    Print a rule of DIVIDER_WIDTH columns with name (and the time) in the middle, at DEBUG level.

    Tasks open and close their run with one; tests use sep="-" between cases.
    """
    middle = f" {name} {datetime.now():%Y-%m-%d %H:%M:%S} " if with_timestamp else f" {name} "
    side = max(4, (DIVIDER_WIDTH - get_display_width(middle)) // 2)
    line = sep * side + middle + sep * side
    if get_display_width(line) < DIVIDER_WIDTH:
        line += sep

    (_logger or logger).debug(line)
    time.sleep(0.02)


def emit_error_record(record: dict) -> None:
    """
    Write one failure as a single JSON line on stderr, next to the coloured console message.

    Args:
        record: JSON-serialisable mapping such as LfsmError.to_record(); other values go through str().
    """
    sys.stderr.write(json.dumps(record, default=str) + "\n")
    sys.stderr.flush()


logger = get_logger()
