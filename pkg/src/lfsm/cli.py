"""
LFSM CLI - Linear Fractional Stable Motion toolkit

Command-line interface for simulating, estimating, decomposing and forecasting LFSM
time series, and for the simulation study and rolling backtests.

Exit codes: 0 success, 1 input error, 2 numerical failure. Failures also write one JSON
error record on standard error.
"""

import sys
from pathlib import Path
from typing import Callable, Optional

import click
import typer

from lfsm.tasks.backtest import BacktestTask
from lfsm.tasks.common import RunConfig
from lfsm.tasks.decompose import DecomposeTask
from lfsm.tasks.estimate import EstimateTask
from lfsm.tasks.forecast import ForecastTask
from lfsm.tasks.reproduce import DESK_SCALE_CONFIG, ReproduceTask
from lfsm.tasks.study import StudyTask
from lfsm.tasks.simulate import SimulateTask
from lfsm_common.enums import Command
from lfsm_common.exceptions import LfsmError
from lfsm_common.log_kit import emit_error_record, logger

from . import __version__

app = typer.Typer(name="lfsm", help="Linear Fractional Stable Motion toolkit - CLI tool", add_completion=False)

# ---- shared options ----
AlphaOpt = typer.Option(None, "--alpha", help="Stability parameter in (0, 2]; a comma-separated grid for study")
HurstOpt = typer.Option(None, "--hurst", help="Hurst exponent in (0, 1); a comma-separated grid for study")
SigmaOpt = typer.Option(None, "--sigma", help="Scale parameter sigma > 0")
DOpt = typer.Option(None, "--d", help="Dimension d, or a comma-separated set for study/backtest")
SeedOpt = typer.Option(None, "--seed", help="Master seed (64-bit unsigned)")
JobsOpt = typer.Option(None, "--jobs", help="Worker processes; default is hardware parallelism")
TolOpt = typer.Option(None, "--tol", help="Decomposition tolerance")
FormatOpt = typer.Option(None, "--format", help="Report format: csv or json")
OutOpt = typer.Option(None, "--out", help="Output file (directory for reproduce); default under LFSM_HOME")
ConfigOpt = typer.Option(None, "--config", help="YAML config; flags override its values")
InputArg = typer.Argument(None, help="Time-series CSV: (timestamp, value) or a single value column")
DtOpt = typer.Option(None, "--dt", help="Time step of a single-column CSV")
ThetaGridOpt = typer.Option(None, "--theta-grid", help="Comma-separated theta grid of the alpha regression")
TauGridOpt = typer.Option(None, "--tau-grid", help="Comma-separated lags of the H regression")
Tau0Opt = typer.Option(None, "--tau0", help="Reference lag, a multiple of the series time step")
WindowOpt = typer.Option(None, "--window", help="Observations per estimation window")
StepOpt = typer.Option(None, "--step", help="Spacing of forecast points, in observations")


def _run(command: Command, task_cls: Callable, config: Optional[str], **overrides):
    """Build the run configuration, run the task, and map failures to exit codes."""
    try:
        run_config = RunConfig.build(command, config, **overrides)
        task_cls(run_config).run()
    except LfsmError as e:
        logger.error(str(e))
        emit_error_record(e.to_record())
        raise typer.Exit(e.exit_code)
    except Exception as e:
        logger.exception(f"Error running {command.value} task: {e}")
        emit_error_record({"error": type(e).__name__, "message": str(e), "exit_code": 1})
        raise typer.Exit(1)


@app.command()
def version():
    """Show version information."""
    typer.echo(f"LFSM toolkit - Version {__version__}")


@app.command()
def simulate(
    alpha: Optional[float] = AlphaOpt,
    hurst: Optional[float] = HurstOpt,
    sigma: Optional[float] = SigmaOpt,
    n_paths: Optional[int] = typer.Option(None, "--n-paths", help="Number of independent paths"),
    horizon: Optional[float] = typer.Option(None, "--horizon", help="Simulated duration"),
    sim_dt: Optional[float] = typer.Option(None, "--sim-dt", help="Simulation time step"),
    seed: Optional[int] = SeedOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    config: Optional[str] = ConfigOpt,
):
    """Simulate LFSM paths by Riemann sums."""
    _run(Command.simulate, SimulateTask, config, alpha=alpha, hurst=hurst, sigma=sigma, n_paths=n_paths,
         horizon=horizon, sim_dt=sim_dt, seed=seed, format=fmt, out=out)


@app.command()
def estimate(
    input_path: Optional[Path] = InputArg,
    dt: Optional[float] = DtOpt,
    tau0: Optional[float] = Tau0Opt,
    theta_grid: Optional[str] = ThetaGridOpt,
    tau_grid: Optional[str] = TauGridOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    config: Optional[str] = ConfigOpt,
):
    """Estimate (alpha, H, sigma) of a time series."""
    _run(Command.estimate, EstimateTask, config, input=input_path, dt=dt, tau0=tau0, theta_grid=theta_grid,
         tau_grid=tau_grid, format=fmt, out=out)


@app.command()
def decompose(
    alpha: Optional[float] = AlphaOpt,
    hurst: Optional[float] = HurstOpt,
    d: Optional[str] = DOpt,
    t: Optional[float] = typer.Option(None, "--t", help="Base time t > 0"),
    tol: Optional[float] = TolOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    config: Optional[str] = ConfigOpt,
):
    """Solve the decomposition coefficients a_{t,i,j}."""
    _run(Command.decompose, DecomposeTask, config, alpha=alpha, hurst=hurst, d=d, t=t, tol=tol, format=fmt, out=out)


@app.command()
def forecast(
    input_path: Optional[Path] = InputArg,
    alpha: Optional[float] = AlphaOpt,
    hurst: Optional[float] = HurstOpt,
    sigma: Optional[float] = SigmaOpt,
    d: Optional[str] = DOpt,
    step: Optional[int] = StepOpt,
    dt: Optional[float] = DtOpt,
    tau0: Optional[float] = Tau0Opt,
    theta_grid: Optional[str] = ThetaGridOpt,
    tau_grid: Optional[str] = TauGridOpt,
    tol: Optional[float] = TolOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    config: Optional[str] = ConfigOpt,
):
    """Forecast the next observation; missing parameters are estimated from the series."""
    _run(Command.forecast, ForecastTask, config, input=input_path, alpha=alpha, hurst=hurst, sigma=sigma, d=d,
         step=step, dt=dt, tau0=tau0, theta_grid=theta_grid, tau_grid=tau_grid, tol=tol, format=fmt, out=out)


@app.command()
def study(
    alpha: Optional[str] = AlphaOpt,
    hurst: Optional[str] = HurstOpt,
    d: Optional[str] = DOpt,
    seed: Optional[int] = SeedOpt,
    jobs: Optional[int] = JobsOpt,
    tol: Optional[float] = TolOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    config: Optional[str] = ConfigOpt,
):
    """Hit-ratio simulation study over an (alpha, H) grid."""
    _run(Command.study, StudyTask, config, alpha=alpha, hurst=hurst, d=d, seed=seed, jobs=jobs, tol=tol,
         format=fmt, out=out)


@app.command()
def backtest(
    input_path: Optional[Path] = InputArg,
    window: Optional[int] = WindowOpt,
    d: Optional[str] = DOpt,
    step: Optional[int] = StepOpt,
    stride: Optional[int] = typer.Option(None, "--stride", help="Observations between successive windows"),
    dt: Optional[float] = DtOpt,
    tau0: Optional[float] = Tau0Opt,
    theta_grid: Optional[str] = ThetaGridOpt,
    tau_grid: Optional[str] = TauGridOpt,
    jobs: Optional[int] = JobsOpt,
    tol: Optional[float] = TolOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    config: Optional[str] = ConfigOpt,
):
    """Rolling-window backtest of the forecast on a time series."""
    _run(Command.backtest, BacktestTask, config, input=input_path, window=window, d=d, step=step, stride=stride,
         dt=dt, tau0=tau0, theta_grid=theta_grid, tau_grid=tau_grid, jobs=jobs, tol=tol, format=fmt, out=out)


@app.command()
def reproduce(
    seed: Optional[int] = SeedOpt,
    jobs: Optional[int] = JobsOpt,
    fmt: Optional[str] = FormatOpt,
    out: Optional[Path] = OutOpt,
    sections: Optional[str] = typer.Option(None, "--sections", help="Comma-separated subset of frontier,lp_error,study,estimator"),
    config: str = typer.Option(str(DESK_SCALE_CONFIG), "--config", help="Reproduction config"),
):
    """Run the desk-scale frontier, L^p error, study and estimator scans."""
    _run(Command.reproduce, ReproduceTask, config, seed=seed, jobs=jobs, format=fmt, out=out, sections=sections)


def main():
    """Console entry point; malformed flags are input errors (exit code 1)."""
    try:
        code = app(standalone_mode=False)
        sys.exit(code if isinstance(code, int) else 0)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.exceptions.ClickException as e:
        e.show()
        emit_error_record({"error": type(e).__name__, "message": e.format_message(), "exit_code": 1})
        sys.exit(1)


if __name__ == "__main__":
    main()
