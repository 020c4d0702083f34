#!/usr/bin/env python3
"""
Simulate Task

Simulates LFSM trajectories by Riemann sums and writes them as (path, time, value) rows.
"""
from pathlib import Path

import polars as pl

from lfsm.core.model import SimConfig, simulate_batch
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig
from lfsm_common.constants import DEFAULT_HORIZON, DEFAULT_SIM_DT, DEFAULT_TRUNCATION
from lfsm_common.exceptions import ParameterError
from lfsm_common.log_kit import divider, logger


class SimulateTask:
    """Task for simulating LFSM paths."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.params = config.lfsm_params()

        self.sim = SimConfig(
            config.float_value("sim_dt", DEFAULT_SIM_DT),
            config.float_value("horizon", DEFAULT_HORIZON),
            config.float_value("truncation", DEFAULT_TRUNCATION),
        )
        self.n_paths = config.int_value("n_paths", 1)
        if self.n_paths < 1:
            raise ParameterError(f"n_paths must be positive, got {self.n_paths}")
        self.rng = config.rng

        name = f"lfsm_a{self.params.alpha:g}_h{self.params.hurst:g}_seed{self.rng.seed}"
        self.output = config.output_path(name)

        logger.info(f"Params: {self.params}, regime: {self.params.regime.value}")
        logger.info(f"Simulation: {self.sim}, paths: {self.n_paths}, seed: {self.rng.seed}")
        logger.info(f"Output: {self.output}")

    def run(self) -> Path:
        divider("LFSM Simulate", sep="-")
        paths = simulate_batch(self.params, self.sim, self.rng, self.n_paths)
        frame = pl.concat(
            [path.to_frame().select(pl.lit(i, dtype=pl.Int64).alias("path"), pl.all()) for i, path in enumerate(paths)]
        )
        emit_report(frame, self.config.fmt, self.output)

        logger.ok(f"Simulated {self.n_paths} path(s) of {len(paths[0])} points")
        logger.debug(f"📁 {self.output}")
        divider("LFSM Simulate", sep="-")
        return self.output
