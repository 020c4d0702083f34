#!/usr/bin/env python3
"""
Common utilities for LFSM tasks.

Configuration loading with the precedence command-line flags > YAML file > defaults, grid parsing,
and output location under the LFSM home directory.
"""
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from lfsm.core.model import LfsmParams
from lfsm.core.rng import RngState
from lfsm_common.constants import DEFAULT_MASTER_SEED, LFSM_HOME_ENV
from lfsm_common.enums import Command, ReportFormat
from lfsm_common.exceptions import ConfigError, ParameterError


def load_config(config_path: str | Path) -> dict:
    """Load YAML configuration from file path.

    Args:
        config_path: Path to the YAML config file.

    Returns:
        A dictionary containing the configuration data.
    """
    config_file = Path(config_path)
    if not config_file.exists():
        raise ConfigError(f"Configuration file not found: {config_file}")
    try:
        with open(config_file, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in {config_file}: {e}")
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"Configuration {config_file} must be a mapping, got {type(config).__name__}")
    return config


def get_lfsm_home(lfsm_home_cfg: Optional[str] = None) -> Path:
    """Get LFSM home directory path from config or environment.

    Args:
        lfsm_home_cfg: Optional LFSM home directory path from config

    Returns:
        Path object for the LFSM home directory
    """
    if lfsm_home_cfg is not None:
        lfsm_home = Path(lfsm_home_cfg)
    else:
        default_home = Path.home() / "lfsm_data"
        lfsm_home = Path(os.getenv(LFSM_HOME_ENV, default_home))

    lfsm_home.mkdir(parents=True, exist_ok=True)
    return lfsm_home


def parse_float_list(value: Any, name: str) -> Optional[tuple[float, ...]]:
    """Accepts a YAML list, a scalar, or a comma-separated string such as '1,2,4'."""
    if value is None:
        return None
    items = value.split(",") if isinstance(value, str) else value if isinstance(value, (list, tuple)) else [value]
    try:
        return tuple(float(x) for x in items if str(x).strip() != "")
    except (TypeError, ValueError):
        raise ParameterError(f"'{name}' must be a list of numbers, got {value!r}")


def parse_int_list(value: Any, name: str) -> Optional[tuple[int, ...]]:
    floats = parse_float_list(value, name)
    if floats is None:
        return None
    if any(x != int(x) for x in floats):
        raise ParameterError(f"'{name}' must be a list of integers, got {value!r}")
    return tuple(int(x) for x in floats)


@dataclass(frozen=True)
class RunConfig:
    """Merged settings of one command run."""

    command: Command
    settings: dict = field(default_factory=dict)

    @classmethod
    def build(cls, command: Command, config_path: Optional[str | Path] = None, **overrides) -> "RunConfig":
        settings = load_config(config_path) if config_path else {}
        settings |= {key: value for key, value in overrides.items() if value is not None}
        return cls(Command(command), settings)

    def get(self, key: str, default: Any = None) -> Any:
        value = self.settings.get(key)
        return default if value is None else value

    def require(self, key: str) -> Any:
        value = self.settings.get(key)
        if value is None:
            raise ConfigError(f"'{key}' is required for the {self.command.value} command (flag or config file)")
        return value

    def float_value(self, key: str, default: Optional[float] = None) -> Optional[float]:
        value = self.get(key, default)
        if value is None:
            return None
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ParameterError(f"'{key}' must be a number, got {value!r}")

    def int_value(self, key: str, default: Optional[int] = None) -> Optional[int]:
        value = self.float_value(key, default)
        if value is None:
            return None
        if value != int(value):
            raise ParameterError(f"'{key}' must be an integer, got {value!r}")
        return int(value)

    def lfsm_params(self) -> LfsmParams:
        self.require("alpha")
        self.require("hurst")
        return LfsmParams(self.float_value("alpha"), self.float_value("hurst"), self.float_value("sigma", 1.0))

    @property
    def fmt(self) -> ReportFormat:
        try:
            return ReportFormat(self.get("format", ReportFormat.csv.value))
        except ValueError:
            raise ParameterError(f"format must be one of {[f.value for f in ReportFormat]}, got {self.get('format')!r}")

    @property
    def rng(self) -> RngState:
        return RngState(self.int_value("seed", DEFAULT_MASTER_SEED))

    @property
    def jobs(self) -> Optional[int]:
        return self.int_value("jobs")

    def output_path(self, name: str, fmt: Optional[ReportFormat] = None) -> Path:
        """--out when given, otherwise <LFSM_HOME>/<command>/<name>.<fmt>."""
        fmt = fmt or self.fmt
        out = self.get("out")
        if out is not None:
            return Path(out)
        return get_lfsm_home(self.get("lfsm_home")) / self.command.value / f"{name}.{fmt.value}"

    def sibling_path(self, main: Path, suffix: str, fmt: ReportFormat) -> Path:
        """Companion report next to the main output, e.g. the fBm reference beside a study table."""
        return main.with_name(f"{main.stem}_{suffix}.{fmt.value}")
