#!/usr/bin/env python3
"""
Reproduce Task

Runs the desk-scale scans from one config file:
- frontier: existence of the decomposition over an (alpha, H) grid, with the frontier line
- lp_error: residual L^p norm as a function of alpha (fixed H) and of H (fixed alpha)
- study: hit-ratio simulation study and the fBm reference
- estimator: distribution of the estimates over simulated paths

Each section is optional, and the "sections" setting (--sections) restricts a run to some of them.
Every produced table goes to <out>/<section>*.<fmt>, where out is --out or <LFSM_HOME>/reproduce.
The default config ships with the package (desk_scale.yaml next to this module).
"""
from pathlib import Path

import numpy as np

from lfsm.core.model import LfsmParams, SimConfig
from lfsm.decomposition.frontier import frontier_curve, scan_existence_frontier
from lfsm.estimation.estimator import EstimationConfig, estimator_study
from lfsm.evaluation.metrics import fbm_reference, lp_error_curve
from lfsm.evaluation.study import run_simulation_study
from lfsm.io.report import emit_report
from lfsm.tasks.common import RunConfig, get_lfsm_home, parse_float_list
from lfsm.tasks.study import study_config
from lfsm_common.constants import DEFAULT_HORIZON, DEFAULT_SIM_DT, DEFAULT_TOL, DEFAULT_TRUNCATION, FRONTIER_D
from lfsm_common.exceptions import ConfigError
from lfsm_common.log_kit import divider, logger

DESK_SCALE_CONFIG = Path(__file__).resolve().with_name("desk_scale.yaml")
SECTIONS = ("frontier", "lp_error", "study", "estimator")


def _grid(section: dict, key: str) -> tuple[float, ...]:
    """A grid is a list, a comma-separated string, or {start, stop, num} for an evenly spaced one."""
    value = section.get(key)
    if isinstance(value, dict):
        try:
            return tuple(float(x) for x in np.linspace(value["start"], value["stop"], int(value["num"])))
        except KeyError as e:
            raise ConfigError(f"grid '{key}' needs start, stop and num (missing {e})")
    grid = parse_float_list(value, key)
    if not grid:
        raise ConfigError(f"grid '{key}' is missing or empty")
    return grid


def _section_names(value) -> tuple[str, ...]:
    if value is None:
        return SECTIONS
    names = tuple(str(s).strip() for s in (value.split(",") if isinstance(value, str) else value) if str(s).strip())
    unknown = [s for s in names if s not in SECTIONS]
    if unknown or not names:
        raise ConfigError(f"unknown reproduce sections {unknown or names}; choose from {SECTIONS}")
    return names


class ReproduceTask:
    """Task for the desk-scale scans."""

    def __init__(self, config: RunConfig):
        self.config = config
        wanted = _section_names(config.get("sections"))
        self.sections = {name: config.settings[name] for name in wanted if config.settings.get(name)}
        if not self.sections:
            raise ConfigError(f"reproduce config has none of the sections {SECTIONS}")
        out = config.get("out")
        self.out_dir = Path(out) if out is not None else get_lfsm_home(config.get("lfsm_home")) / "reproduce"
        self.fmt = config.fmt
        self.tol = config.float_value("tol", DEFAULT_TOL)
        # validate the study section up front
        self.study = study_config(config, self.sections["study"]) if "study" in self.sections else None

        logger.info(f"Sections: {list(self.sections)}")
        logger.info(f"Output directory: {self.out_dir}")

    def _path(self, name: str) -> Path:
        return self.out_dir / f"{name}.{self.fmt.value}"

    def _frontier(self, section: dict):
        d = int(section.get("d", FRONTIER_D))
        table = scan_existence_frontier(_grid(section, "alpha_grid"), _grid(section, "hurst_grid"), 1.0, d, self.tol)
        emit_report(table, self.fmt, self._path("frontier_scan"))
        emit_report(frontier_curve(table), self.fmt, self._path("frontier_curve"))
        logger.ok(f"Frontier: {int(table['exists'].sum())}/{table.height} cells solvable at d={d}")

    def _lp_error(self, section: dict):
        d, p = int(section.get("d", 2)), float(section["p"])
        if "alpha_curve" in section:
            curve = section["alpha_curve"]
            table = lp_error_curve(_grid(curve, "alpha_grid"), [float(curve["hurst"])], d, p, self.tol)
            emit_report(table, self.fmt, self._path("lp_error_alpha"))
        if "hurst_curve" in section:
            curve = section["hurst_curve"]
            table = lp_error_curve([float(curve["alpha"])], _grid(curve, "hurst_grid"), d, p, self.tol)
            emit_report(table, self.fmt, self._path("lp_error_hurst"))
        logger.ok(f"L^p error curves written (d={d}, p={p})")

    def _study(self, section: dict):
        table = run_simulation_study(self.study, self.config.jobs)
        emit_report(table, self.fmt, self._path("study"))
        emit_report(fbm_reference(sorted({h for _, h in self.study.param_grid})), self.fmt, self._path("study_fbm_reference"))
        logger.ok(f"Study: {table.height} rows")

    def _estimator(self, section: dict):
        alphas, hursts = _grid(section, "alpha_grid"), _grid(section, "hurst_grid")
        grid = [LfsmParams(a, h) for a in alphas for h in hursts]
        sim = SimConfig(
            float(section.get("sim_dt", DEFAULT_SIM_DT)),
            float(section.get("horizon", DEFAULT_HORIZON)),
            float(section.get("truncation", DEFAULT_TRUNCATION)),
        )
        est_cfg = EstimationConfig(tau0=float(section.get("tau0", 0.1)))
        table = estimator_study(grid, int(section.get("n_paths", 100)), sim, est_cfg, self.config.rng, self.config.jobs)
        emit_report(table, self.fmt, self._path("estimator"))
        logger.ok(f"Estimator study: {len(grid)} cells")

    def run(self) -> Path:
        divider("LFSM Reproduce", sep="-")
        for name, section in self.sections.items():
            logger.info(f"Running section '{name}'")
            getattr(self, f"_{name}")(section)
        logger.debug(f"📁 {self.out_dir}")
        divider("LFSM Reproduce", sep="-")
        return self.out_dir
