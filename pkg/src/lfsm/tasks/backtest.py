#!/usr/bin/env python3
"""
Backtest Task

Rolling-window estimation and forecasting on a time-series CSV, for a set of dimensions d.

The per-window table is long: one row per (window, d), so it holds windows attempted x |d_set| rows
(filter on d for the rows of one dimension). The summary table beside it has one row per d.
"""
from pathlib import Path

import polars as pl

from lfsm.evaluation.backtest import run_backtest_multi
from lfsm.io.csv_reader import ingest_csv
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig, parse_int_list
from lfsm.tasks.estimate import estimation_config
from lfsm_common.constants import DEFAULT_BACKTEST_D_SET, DEFAULT_TOL, DEFAULT_WINDOW
from lfsm_common.log_kit import divider, logger


class BacktestTask:
    """Task for the rolling-window backtest."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.input = Path(config.require("input"))
        self.series = ingest_csv(self.input, config.float_value("dt"))
        self.window = config.int_value("window", DEFAULT_WINDOW)
        self.d_set = parse_int_list(config.get("d_set", config.get("d")), "d_set") or DEFAULT_BACKTEST_D_SET
        self.step = config.int_value("step", 1)
        self.stride = config.int_value("stride", 1)
        self.tol = config.float_value("tol", DEFAULT_TOL)
        self.est_cfg = estimation_config(config, self.series.dt)

        self.output = config.output_path(f"{self.input.stem}_backtest_w{self.window}")
        self.summary_output = config.sibling_path(self.output, "summary", config.fmt)

        logger.info(f"Input: {self.input} ({len(self.series)} points, dt={self.series.dt:g})")
        logger.info(f"Window: {self.window}, d: {list(self.d_set)}, step: {self.step}, stride: {self.stride}")
        logger.info(f"Output: {self.output}")

    def run(self) -> Path:
        divider("LFSM Backtest", sep="-")
        reports = run_backtest_multi(
            self.series, self.window, self.d_set, self.step, self.stride, self.est_cfg, self.tol, self.config.jobs
        )
        per_window = pl.concat([report.per_window for report in reports.values()])
        summary = pl.DataFrame([report.summary() for report in reports.values()], infer_schema_length=None)
        emit_report(per_window, self.config.fmt, self.output)
        emit_report(summary, self.config.fmt, self.summary_output)

        for d, report in reports.items():
            if report.hit_ratio is None:
                logger.warning(f"d={d}: no usable forecast ({report.n_failed}/{report.n_windows} windows failed)")
            else:
                logger.debug(f"   d={d:>2}: hit ratio {report.hit_ratio:.2%} over {report.n_forecasts} forecasts")
        logger.ok(f"Backtest finished over {next(iter(reports.values())).n_windows} windows")
        logger.debug(f"📁 {self.output}")
        logger.debug(f"📁 {self.summary_output}")
        divider("LFSM Backtest", sep="-")
        return self.output
