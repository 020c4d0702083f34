#!/usr/bin/env python3
"""
Estimate Task

Estimates (alpha, H, sigma) of an LFSM from a time-series CSV.
"""
from pathlib import Path

from lfsm.estimation.estimator import EstimationConfig, estimate_lfsm
from lfsm.io.csv_reader import ingest_csv
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig, parse_float_list
from lfsm_common.constants import DEFAULT_THETA_GRID
from lfsm_common.log_kit import divider, logger


def estimation_config(config: RunConfig, dt: float) -> EstimationConfig:
    """EstimationConfig from merged settings; tau0 defaults to the series time step."""
    return EstimationConfig(
        tau0=config.float_value("tau0", dt),
        theta_grid=parse_float_list(config.get("theta_grid"), "theta_grid") or DEFAULT_THETA_GRID,
        tau_grid=parse_float_list(config.get("tau_grid"), "tau_grid") or (),
    )


class EstimateTask:
    """Task for estimating LFSM parameters of an observed series."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.input = Path(config.require("input"))
        self.series = ingest_csv(self.input, config.float_value("dt"))
        self.est_cfg = estimation_config(config, self.series.dt)
        self.output = config.output_path(f"{self.input.stem}_estimate")

        logger.info(f"Input: {self.input} ({len(self.series)} points, dt={self.series.dt:g})")
        logger.info(f"tau0: {self.est_cfg.tau0:g}, tau grid: {self.est_cfg.tau_grid}")
        logger.info(f"Output: {self.output}")

    def run(self) -> Path:
        divider("LFSM Estimate", sep="-")
        result = estimate_lfsm(self.series, self.est_cfg)
        record = {"n": len(self.series), "dt": self.series.dt, **result.to_record(), "regime": result.regime.value}
        emit_report(record, self.config.fmt, self.output)

        logger.ok(f"alpha={result.alpha_hat:.4f}, H={result.h_hat:.4f}, sigma={result.sigma_hat:.6g}")
        logger.debug(f"   H - 1/alpha = {result.memory:+.4f} ({result.regime.value})")
        logger.debug(f"   Regression points: alpha {result.alpha_fit.points_used}, H {result.h_fit.points_used}")
        logger.debug(f"📁 {self.output}")
        divider("LFSM Estimate", sep="-")
        return self.output
