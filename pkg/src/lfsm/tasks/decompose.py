#!/usr/bin/env python3
"""
Decompose Task

Solves the codifference decomposition at (alpha, H, t, d) and writes the coefficient table.
"""
from pathlib import Path

import numpy as np

from lfsm.decomposition.solver import coefficient_table, solve_coefficients, system_residuals
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig, parse_int_list
from lfsm_common.constants import DEFAULT_TOL, FRONTIER_D
from lfsm_common.exceptions import ParameterError
from lfsm_common.log_kit import divider, logger


def single_d(config: RunConfig, default: int) -> int:
    d_values = parse_int_list(config.get("d"), "d") or (default,)
    if len(d_values) != 1:
        raise ParameterError(f"the {config.command.value} command takes a single d, got {d_values}")
    return d_values[0]


class DecomposeTask:
    """Task for solving decomposition coefficients."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.params = config.lfsm_params()
        self.t = config.float_value("t", 1.0)
        self.d = single_d(config, FRONTIER_D)
        self.tol = config.float_value("tol", DEFAULT_TOL)
        if not self.tol > 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        self.output = config.output_path(f"coeffs_a{self.params.alpha:g}_h{self.params.hurst:g}_t{self.t:g}_d{self.d}")

        logger.info(f"alpha={self.params.alpha}, H={self.params.hurst}, t={self.t:g}, d={self.d}, tol={self.tol:g}")
        logger.info(f"Output: {self.output}")

    def run(self) -> Path:
        divider("LFSM Decompose", sep="-")
        coeffs, report = solve_coefficients(self.params.alpha, self.params.hurst, self.t, self.d, self.tol)
        emit_report(coefficient_table(coeffs), self.config.fmt, self.output)

        logger.ok(f"Solved {self.d * (self.d + 1) // 2} coefficients ({self.params.regime.value})")
        logger.debug(f"   Max equation residual: {report.max_residual:.3g}")
        logger.debug(f"   Max norm-form residual: {np.max(np.abs(system_residuals(coeffs))):.3g}")
        logger.debug(f"   Newton iterations: {int(report.iterations.sum())}, bisection fallbacks: {report.fallbacks}")
        logger.debug(f"📁 {self.output}")
        divider("LFSM Decompose", sep="-")
        return self.output
