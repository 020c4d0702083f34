#!/usr/bin/env python3
"""
Tests for run configuration: YAML loading, flag precedence, list parsing and output locations
"""

from pathlib import Path

import pytest

from lfsm.tasks.common import RunConfig, load_config, parse_float_list, parse_int_list
from lfsm.tasks.reproduce import DESK_SCALE_CONFIG
from lfsm_common.enums import Command, ReportFormat
from lfsm_common.exceptions import ConfigError, ParameterError

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def test_load_config(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")

    broken = tmp_path / "broken.yaml"
    broken.write_text("alpha: [1.5, 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(broken)

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(listing)

    empty = tmp_path / "empty.yaml"
    empty.write_text("", encoding="utf-8")
    assert load_config(empty) == {}


def test_shipped_configs_load():
    for path in sorted(CONFIG_DIR.glob("*/*.yaml")):
        assert isinstance(load_config(path), dict), path


def test_packaged_reproduce_config(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert DESK_SCALE_CONFIG.is_absolute()
    config = RunConfig.build(Command.reproduce, DESK_SCALE_CONFIG)
    assert set(config.settings) >= {"frontier", "lp_error", "study", "estimator"}


def test_flags_override_file(tmp_path):
    path = tmp_path / "decompose.yaml"
    path.write_text("alpha: 1.5\nhurst: 0.8\nd: 7\nformat: json\n", encoding="utf-8")
    config = RunConfig.build(Command.decompose, path, alpha=1.2, hurst=None, out=None)
    assert config.float_value("alpha") == 1.2
    assert config.float_value("hurst") == 0.8
    assert config.int_value("d") == 7
    assert config.fmt == ReportFormat.json

    params = config.lfsm_params()
    assert (params.alpha, params.hurst, params.sigma) == (1.2, 0.8, 1.0)

    defaults = RunConfig.build("decompose")
    assert defaults.fmt == ReportFormat.csv
    assert defaults.get("t", 1.0) == 1.0
    with pytest.raises(ConfigError):
        defaults.require("alpha")


def test_value_conversion():
    config = RunConfig.build(Command.study, None, d="2.5", tol="abc", format="xml", seed=7)
    with pytest.raises(ParameterError):
        config.int_value("d")
    with pytest.raises(ParameterError):
        config.float_value("tol")
    with pytest.raises(ParameterError):
        config.fmt
    assert config.rng == RunConfig.build(Command.study, None, seed=7).rng


def test_parse_lists():
    assert parse_float_list("1,2,4", "tau_grid") == (1.0, 2.0, 4.0)
    assert parse_float_list([0.5, 1], "alpha") == (0.5, 1.0)
    assert parse_float_list(0.8, "hurst") == (0.8,)
    assert parse_float_list(None, "hurst") is None
    assert parse_int_list("2, 5, 20", "d") == (2, 5, 20)
    with pytest.raises(ParameterError):
        parse_float_list("1,x", "alpha")
    with pytest.raises(ParameterError):
        parse_int_list("2.5", "d")


def test_output_paths(tmp_path):
    explicit = RunConfig.build(Command.estimate, None, out=tmp_path / "est.json")
    assert explicit.output_path("series_estimate") == tmp_path / "est.json"

    home = RunConfig.build(Command.estimate, None, lfsm_home=str(tmp_path / "home"), format="json")
    path = home.output_path("series_estimate")
    assert path == tmp_path / "home" / "estimate" / "series_estimate.json"
    assert (tmp_path / "home").is_dir()
    assert home.sibling_path(path, "fbm", ReportFormat.csv) == path.with_name("series_estimate_fbm.csv")


if __name__ == "__main__":
    import tempfile

    test_shipped_configs_load()
    test_value_conversion()
    test_parse_lists()
    for test in (test_load_config, test_flags_override_file, test_output_paths):
        with tempfile.TemporaryDirectory() as tmp:
            test(Path(tmp))
