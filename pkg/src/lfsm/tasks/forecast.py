#!/usr/bin/env python3
"""
Forecast Task

Forecasts the next observation of a time-series CSV. Parameters not given are estimated from the series.
"""
from pathlib import Path

from lfsm.core.model import LfsmParams, TimeSeries
from lfsm.estimation.estimator import estimate_lfsm
from lfsm.forecast.predictor import predict_next
from lfsm.io.csv_reader import ingest_csv
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig
from lfsm.tasks.decompose import single_d
from lfsm.tasks.estimate import estimation_config
from lfsm_common.constants import DEFAULT_TOL
from lfsm_common.exceptions import ParameterError
from lfsm_common.log_kit import divider, logger


class ForecastTask:
    """Task for a one-step-ahead forecast of an observed series."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.input = Path(config.require("input"))
        self.series = ingest_csv(self.input, config.float_value("dt"))
        self.d = single_d(config, 2)
        self.step = config.int_value("step", 1)
        self.tol = config.float_value("tol", DEFAULT_TOL)
        if self.step < 1:
            raise ParameterError(f"step must be positive, got {self.step}")

        self.estimated = config.get("alpha") is None or config.get("hurst") is None
        self.est_cfg = estimation_config(config, self.series.dt) if self.estimated else None
        self.params = None if self.estimated else config.lfsm_params()
        self.output = config.output_path(f"{self.input.stem}_forecast_d{self.d}", config.fmt)

        logger.info(f"Input: {self.input} ({len(self.series)} points), d={self.d}, step={self.step}")
        logger.info(f"Parameters: {'estimated from the series' if self.estimated else self.params}")
        logger.info(f"Output: {self.output}")

    def run(self) -> Path:
        divider("LFSM Forecast", sep="-")
        params = self.params
        if self.estimated:
            est = estimate_lfsm(self.series, self.est_cfg)
            sigma = self.config.float_value("sigma", est.sigma_hat)
            params = LfsmParams(est.alpha_hat, est.h_hat, sigma)
            logger.debug(f"   Estimated alpha={est.alpha_hat:.4f}, H={est.h_hat:.4f}, sigma={sigma:.6g}")

        points = TimeSeries(self.series.values[:: -self.step][::-1], self.series.dt * self.step)
        forecast = predict_next(points, params, self.d, self.tol)
        record = {
            **forecast.to_record(),
            "alpha": params.alpha,
            "hurst": params.hurst,
            "sigma": params.sigma,
            "d": self.d,
            "step": self.step,
        }
        emit_report(record, self.config.fmt, self.output)

        logger.ok(f"Predicted {forecast.predicted:.6g} (increment {forecast.predicted_increment:+.6g})")
        logger.debug(f"   Method: {forecast.method.value}, residual scale: {forecast.residual_scale:.6g}")
        if forecast.no_signal:
            logger.warning("Predicted increment is zero within round-off (no signal)")
        logger.debug(f"📁 {self.output}")
        divider("LFSM Forecast", sep="-")
        return self.output
