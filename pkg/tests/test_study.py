#!/usr/bin/env python3
"""
Tests for the hit-ratio simulation study
"""

import polars as pl
import pytest

from lfsm.evaluation.metrics import fbm_hit_ratio
from lfsm.evaluation.study import STUDY_COLUMNS, StudyConfig, run_simulation_study
from lfsm_common.exceptions import ParameterError
from lfsm_common.log_kit import divider, logger


def _cell(table: pl.DataFrame, alpha: float, hurst: float, d: int = 2) -> dict:
    return table.filter((pl.col("alpha") == alpha) & (pl.col("hurst") == hurst) & (pl.col("d") == d)).row(0, named=True)


def test_study_shape():
    """Single path of 2,001 points per cell, d = 2, fixed seed."""
    divider("Simulation study, d = 2", sep="-")
    cells = ((1.5, 2.0 / 3.0), (0.5, 0.8), (1.5, 0.5))
    table = run_simulation_study(StudyConfig(cells, d_set=(2,)), jobs=1, show_progress=False)
    logger.debug(f"Study table:\n{table}")
    assert table.height == 3
    assert table["n_forecasts"].to_list() == [1999] * 3

    martingale = _cell(table, 1.5, 2.0 / 3.0)
    assert 0.47 <= martingale["hit_ratio"] <= 0.53
    assert martingale["n_no_signal"] == 1999

    assert _cell(table, 0.5, 0.8)["hit_ratio"] < 0.5
    assert _cell(table, 1.5, 0.5)["hit_ratio"] > 0.53


def test_gaussian_cell_tracks_fbm():
    divider("Simulation study, alpha = 2 vs fBm", sep="-")
    row = run_simulation_study(StudyConfig(((2.0, 0.8),), d_set=(2,)), jobs=1, show_progress=False).row(0, named=True)
    logger.debug(f"alpha=2, H=0.8, 2,001 points: hit ratio {row['hit_ratio']:.4f}, fBm {fbm_hit_ratio(0.8):.4f}")
    assert row["n_forecasts"] == 1999
    assert row["hit_ratio"] == pytest.approx(fbm_hit_ratio(0.8), abs=0.02)


def test_gaussian_cell_tracks_fbm_long_path():
    cfg = StudyConfig(((2.0, 0.8),), series_length=20_001, d_set=(2,))
    row = run_simulation_study(cfg, jobs=1, show_progress=False).row(0, named=True)
    logger.debug(f"alpha=2, H=0.8: hit ratio {row['hit_ratio']:.4f}, fBm {fbm_hit_ratio(0.8):.4f}")
    assert row["n_forecasts"] == 19_999
    assert row["hit_ratio"] == pytest.approx(fbm_hit_ratio(0.8), abs=0.03)


def test_hit_ratio_curve_bottoms_out_at_independence():
    """alpha = 1.5, d = 2: the curve over H is lowest near H = 1/alpha."""
    divider("Hit-ratio curve over H, alpha = 1.5", sep="-")
    hursts = (0.3, 0.5, 2.0 / 3.0, 0.8, 0.9)
    table = run_simulation_study(StudyConfig(tuple((1.5, h) for h in hursts), d_set=(2,)), jobs=1, show_progress=False)
    curve = table.sort("hit_ratio")
    logger.debug(f"Hit-ratio curve:\n{table.select('hurst', 'hit_ratio')}")
    assert abs(curve["hurst"][0] - 2.0 / 3.0) <= 0.05
    assert curve["hit_ratio"][0] == pytest.approx(0.5)
    assert (curve["hit_ratio"][1:] > 0.5).all()


def test_more_dimensions_do_not_hurt_antipersistent_cells():
    divider("Hit ratio against d, H < 1/alpha", sep="-")
    cells = ((1.5, 0.3), (1.5, 0.5), (2.0, 0.3))
    table = run_simulation_study(StudyConfig(cells, d_set=(2, 5, 20)), jobs=None, show_progress=False)
    logger.debug(f"Study table:\n{table}")
    assert _cell(table, 1.5, 0.3, 20)["exists"]
    for alpha, hurst in cells:
        rows = [_cell(table, alpha, hurst, d) for d in (2, 5, 20)]
        rows = [r for r in rows if r["exists"]]
        assert rows[0]["d"] == 2
        for lower, higher in zip(rows, rows[1:]):
            # three binomial standard deviations
            noise = 3.0 * (0.25 / higher["n_forecasts"]) ** 0.5
            assert higher["hit_ratio"] >= lower["hit_ratio"] - noise


def test_forecast_counts_per_dimension():
    cfg = StudyConfig(((1.5, 0.8),), series_length=301, d_set=(2, 5, 7), sim_dt=0.05, truncation=10.0)
    table = run_simulation_study(cfg, jobs=1, show_progress=False)
    assert table["d"].to_list() == [2, 5, 7]
    assert table["n_forecasts"].to_list() == [299, 296, 294]
    assert table["exists"].all()


def test_missing_cells_are_recorded():
    # small (alpha, H) lies beyond the existence frontier for larger d
    cfg = StudyConfig(((0.5, 0.1), (1.5, 0.8)), series_length=101, d_set=(2, 7), sim_dt=0.1, truncation=5.0)
    table = run_simulation_study(cfg, jobs=1, show_progress=False)
    assert table.height == 4
    missing = table.filter(~pl.col("exists"))
    assert missing["hit_ratio"].null_count() == missing.height
    assert (missing["n_forecasts"] == 0).all()
    assert _cell(table, 1.5, 0.8, 7)["exists"]


def test_study_is_deterministic():
    divider("Study determinism", sep="-")
    cfg = StudyConfig(((1.5, 0.8), (1.2, 0.3), (1.9, 0.6)), series_length=201, d_set=(2, 3), sim_dt=0.1, truncation=5.0)
    first = run_simulation_study(cfg, jobs=1, show_progress=False)
    second = run_simulation_study(cfg, jobs=1, show_progress=False)
    parallel = run_simulation_study(cfg, jobs=2, show_progress=False)
    assert first.equals(second)
    assert first.equals(parallel)
    assert dict(first.schema) == STUDY_COLUMNS
    assert first.select("alpha", "hurst", "d").rows() == [
        (a, h, d) for a, h in cfg.param_grid for d in cfg.d_set
    ]


def test_study_config_validation():
    with pytest.raises(ParameterError):
        StudyConfig(())
    with pytest.raises(ParameterError):
        StudyConfig(((1.5, 1.2),))
    with pytest.raises(ParameterError):
        StudyConfig(((1.5, 0.8),), d_set=(1, 2))
    with pytest.raises(ParameterError):
        StudyConfig(((1.5, 0.8),), series_length=5, d_set=(5,))
    with pytest.raises(ParameterError):
        StudyConfig(((1.5, 0.8),), sample_every=0.001)
    cfg = StudyConfig(((1.5, 0.8),), series_length=11, d_set=(2,), sim_dt=0.25, sample_every=2.0)
    assert cfg.thinning == 8
    assert cfg.sim.horizon == 20.0


if __name__ == "__main__":
    test_study_shape()
    test_gaussian_cell_tracks_fbm()
    test_gaussian_cell_tracks_fbm_long_path()
    test_hit_ratio_curve_bottoms_out_at_independence()
    test_more_dimensions_do_not_hurt_antipersistent_cells()
    test_forecast_counts_per_dimension()
    test_missing_cells_are_recorded()
    test_study_is_deterministic()
    test_study_config_validation()
