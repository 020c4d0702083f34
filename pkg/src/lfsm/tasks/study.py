#!/usr/bin/env python3
"""
Study Task

Runs the hit-ratio simulation study over an (alpha, H) grid and writes the study table together with the
fBm d = 2 reference curve.
"""
from pathlib import Path

from lfsm.evaluation.metrics import fbm_reference
from lfsm.evaluation.study import StudyConfig, run_simulation_study
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig, parse_float_list, parse_int_list
from lfsm_common.constants import DEFAULT_SIM_DT, DEFAULT_STUDY_D_SET, DEFAULT_STUDY_LENGTH, DEFAULT_TOL, DEFAULT_TRUNCATION
from lfsm_common.exceptions import ConfigError, ParameterError
from lfsm_common.log_kit import divider, logger


def study_config(config: RunConfig, section: dict | None = None) -> StudyConfig:
    """
    StudyConfig from merged settings, or from a nested section of them (reproduce).

    The grid is either param_grid, a list of [alpha, H] pairs, or the product of alpha_grid and hurst_grid
    (the flags --alpha and --hurst accept comma-separated grids here).
    """
    cfg = RunConfig(config.command, {**config.settings, **(section or {})})
    pairs = cfg.get("param_grid")
    if pairs is not None:
        try:
            param_grid = tuple((float(a), float(h)) for a, h in pairs)
        except (TypeError, ValueError):
            raise ParameterError(f"param_grid must be a list of [alpha, H] pairs, got {pairs!r}")
    else:
        alphas = parse_float_list(cfg.get("alpha_grid", cfg.get("alpha")), "alpha_grid")
        hursts = parse_float_list(cfg.get("hurst_grid", cfg.get("hurst")), "hurst_grid")
        if not alphas or not hursts:
            raise ConfigError("study needs param_grid or both alpha_grid and hurst_grid")
        param_grid = tuple((a, h) for a in alphas for h in hursts)

    return StudyConfig(
        param_grid=param_grid,
        series_length=cfg.int_value("series_length", DEFAULT_STUDY_LENGTH),
        d_set=parse_int_list(cfg.get("d_set", cfg.get("d")), "d_set") or DEFAULT_STUDY_D_SET,
        master_seed=cfg.rng.seed,
        sim_dt=cfg.float_value("sim_dt", DEFAULT_SIM_DT),
        truncation=cfg.float_value("truncation", DEFAULT_TRUNCATION),
        sample_every=cfg.float_value("sample_every", 1.0),
        tol=cfg.float_value("tol", DEFAULT_TOL),
    )


class StudyTask:
    """Task for the hit-ratio simulation study."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.study = study_config(config)
        self.output = config.output_path(f"study_seed{self.study.master_seed}")
        self.reference_output = config.sibling_path(self.output, "fbm_reference", config.fmt)

        logger.info(f"Grid: {len(self.study.param_grid)} (alpha, H) cells, d in {self.study.d_set}")
        logger.info(f"Series length: {self.study.series_length}, seed: {self.study.master_seed}, sim dt: {self.study.sim_dt}")
        logger.info(f"Output: {self.output}")

    def run(self) -> Path:
        divider("LFSM Study", sep="-")
        table = run_simulation_study(self.study, self.config.jobs)
        emit_report(table, self.config.fmt, self.output)
        hursts = sorted({h for _, h in self.study.param_grid})
        emit_report(fbm_reference(hursts), self.config.fmt, self.reference_output)

        missing = table.filter(~table["exists"]).height
        logger.ok(f"Study finished: {table.height} rows, {missing} without decomposition")
        logger.debug(f"📁 {self.output}")
        logger.debug(f"📁 {self.reference_output}")
        divider("LFSM Study", sep="-")
        return self.output
