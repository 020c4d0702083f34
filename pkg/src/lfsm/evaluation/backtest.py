"""
Rolling-window backtest on an observed series

For each window [e - window_len + 1, e] the parameters (alpha, H, sigma) are estimated from every
observation of the window, then for each dimension d the points e - (d-1) step, ..., e forecast the
value at e + step. One estimation per window is shared by all dimensions.
"""

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import polars as pl

from lfsm.core.model import LfsmParams, TimeSeries
from lfsm.estimation.estimator import EstimationConfig, estimate_lfsm
from lfsm.evaluation.metrics import hit_ratio
from lfsm.forecast.predictor import predict_next
from lfsm_common.constants import DEFAULT_TOL
from lfsm_common.enums import WindowStatus
from lfsm_common.exceptions import DecompositionError, LfsmError, NoUsableForecastsError, ParameterError
from lfsm_common.log_kit import logger
from lfsm_common.parallel import resolve_jobs, run_parallel

WINDOW_COLUMNS = {
    "window_end": pl.Int64,
    "time": pl.Float64,
    "d": pl.Int64,
    "status": pl.String,
    "alpha_hat": pl.Float64,
    "h_hat": pl.Float64,
    "sigma_hat": pl.Float64,
    "predicted": pl.Float64,
    "predicted_increment": pl.Float64,
    "forecast_sign": pl.Int64,
    "realized_sign": pl.Int64,
    "no_signal": pl.Boolean,
}


@dataclass(frozen=True, eq=False)
class BacktestReport:
    """
    Backtest of one dimension d. per_window holds one row per attempted window; hit_ratio is None
    when no window produced a usable forecast.
    """

    d: int
    per_window: pl.DataFrame
    hit_ratio: Optional[float]
    n_forecasts: int
    n_no_signal: int
    n_realized_ties: int

    @property
    def n_windows(self) -> int:
        return self.per_window.height

    @property
    def n_failed(self) -> int:
        return self.per_window.filter(pl.col("status") != WindowStatus.ok.value).height

    @property
    def all_failed(self) -> bool:
        return self.n_windows > 0 and self.n_failed == self.n_windows

    def summary(self) -> dict:
        return {
            "d": self.d,
            "hit_ratio": self.hit_ratio,
            "n_windows": self.n_windows,
            "n_forecasts": self.n_forecasts,
            "n_no_signal": self.n_no_signal,
            "n_realized_ties": self.n_realized_ties,
            "n_failed": self.n_failed,
        }


def _window_rows(payload: tuple) -> list[dict]:
    values, dt, t0, ends, window_len, d_set, step, est_cfg, tol = payload
    rows = []
    for e in ends:
        base = {"window_end": int(e), "time": t0 + e * dt, "alpha_hat": None, "h_hat": None, "sigma_hat": None,
                "predicted": None, "predicted_increment": None, "forecast_sign": None, "no_signal": None}
        realized_sign = int(np.sign(values[e + step] - values[e]))
        window = TimeSeries(values[e - window_len + 1 : e + 1], dt, t0 + (e - window_len + 1) * dt)
        try:
            est = estimate_lfsm(window, est_cfg)
            params = LfsmParams(est.alpha_hat, est.h_hat, est.sigma_hat)
        except LfsmError as err:
            logger.debug(f"Window ending at {e}: estimation failed ({err})")
            rows += [base | {"d": d, "status": WindowStatus.estimation_failed.value, "realized_sign": realized_sign}
                     for d in d_set]
            continue

        base |= {"alpha_hat": est.alpha_hat, "h_hat": est.h_hat, "sigma_hat": est.sigma_hat}
        for d in d_set:
            points = TimeSeries(values[e - (d - 1) * step : e + 1 : step], dt * step)
            try:
                forecast = predict_next(points, params, d, tol)
            except (DecompositionError, ParameterError) as err:
                logger.debug(f"Window ending at {e}, d={d}: no forecast ({err})")
                rows.append(base | {"d": d, "status": WindowStatus.decomposition_failed.value, "realized_sign": realized_sign})
                continue
            rows.append(
                base
                | {
                    "d": d,
                    "status": WindowStatus.ok.value,
                    "predicted": forecast.predicted,
                    "predicted_increment": forecast.predicted_increment,
                    "forecast_sign": int(np.sign(forecast.predicted_increment)),
                    "realized_sign": realized_sign,
                    "no_signal": forecast.no_signal,
                }
            )
    return rows


def _report(d: int, frame: pl.DataFrame) -> BacktestReport:
    ok = frame.filter(pl.col("status") == WindowStatus.ok.value)
    try:
        hr = hit_ratio(ok["forecast_sign"].to_numpy(), ok["realized_sign"].to_numpy(), ok["no_signal"].to_numpy())
    except NoUsableForecastsError as e:
        return BacktestReport(d, frame, None, ok.height, e.details.get("n_no_signal", 0), e.details.get("n_realized_ties", 0))
    return BacktestReport(d, frame, hr.hit_ratio, ok.height, hr.n_no_signal, hr.n_realized_ties)


def run_backtest_multi(
    series: TimeSeries,
    window_len: int,
    d_set: Iterable[int],
    step: int = 1,
    stride: int = 1,
    est_cfg: Optional[EstimationConfig] = None,
    tol: float = DEFAULT_TOL,
    jobs: Optional[int] = None,
    show_progress: bool = True,
) -> dict[int, BacktestReport]:
    """
    Backtest every dimension of d_set over the same rolling windows.

    Args:
        series: Observed series
        window_len: Observations per estimation window
        d_set: Forecast dimensions, each at least 2
        step: Spacing, in observations, of the forecast points and of the forecast horizon
        stride: Observations between the ends of successive windows
        est_cfg: Estimation settings, by default tau0 = series.dt and the geometric tau grid
        tol: Decomposition tolerance
        jobs: Worker processes, None for hardware parallelism

    Returns:
        Mapping d -> BacktestReport
    """
    d_set = sorted({int(d) for d in d_set})
    n = len(series)
    if not d_set or d_set[0] < 2:
        raise ParameterError(f"backtest dimensions must be at least 2, got {d_set}")
    if step < 1 or stride < 1:
        raise ParameterError(f"step and stride must be positive, got step={step}, stride={stride}")
    if (d_set[-1] - 1) * step > window_len - 1:
        raise ParameterError(f"d={d_set[-1]} points at step {step} do not fit in a window of {window_len}")
    if n < window_len + step:
        raise ParameterError(f"series of length {n} is too short for window {window_len} and step {step}")
    est_cfg = est_cfg or EstimationConfig(tau0=series.dt)

    ends = np.arange(window_len - 1, n - step, stride)
    n_chunks = min(ends.size, 4 * resolve_jobs(jobs))
    tasks = [
        (k, (series.values, series.dt, series.t0, chunk.tolist(), window_len, d_set, step, est_cfg, tol))
        for k, chunk in enumerate(np.array_split(ends, n_chunks))
    ]
    results = run_parallel(_window_rows, tasks, "Backtest windows", jobs, show_progress)
    frame = pl.DataFrame([row for k in range(len(tasks)) for row in results[k]], schema=WINDOW_COLUMNS)

    reports = {d: _report(d, frame.filter(pl.col("d") == d)) for d in d_set}
    n_est_failed = frame.filter(pl.col("status") == WindowStatus.estimation_failed.value)["window_end"].n_unique()
    if n_est_failed:
        logger.warning(f"Estimation failed on {n_est_failed}/{ends.size} windows")
    return reports


def run_backtest(
    series: TimeSeries,
    window_len: int,
    d: int,
    step: int = 1,
    stride: int = 1,
    est_cfg: Optional[EstimationConfig] = None,
    tol: float = DEFAULT_TOL,
    jobs: Optional[int] = None,
    show_progress: bool = True,
) -> BacktestReport:
    return run_backtest_multi(series, window_len, [d], step, stride, est_cfg, tol, jobs, show_progress)[d]
