from enum import Enum


class Command(str, Enum):
    """
    CLI commands that accept a run configuration.
    """

    simulate = "simulate"
    estimate = "estimate"
    decompose = "decompose"
    forecast = "forecast"
    study = "study"
    backtest = "backtest"
    reproduce = "reproduce"


class ReportFormat(str, Enum):
    csv = "csv"
    json = "json"


class ForecastMethod(str, Enum):
    """
    Interpretation of the one-step forecast.
    """

    # alpha > 1: the conditional expectation exists
    conditional_expectation = "conditional_expectation"
    # alpha <= 1: same formula, justified as a (semi)metric projection
    semimetric_projection = "semimetric_projection"


class DependenceRegime(str, Enum):
    """
    Sign of the serial dependence of LFSM increments, given by H - 1/alpha.
    """

    persistent = "persistent"
    independent = "independent"
    antipersistent = "antipersistent"


class WindowStatus(str, Enum):
    """
    Outcome of one backtest window.
    """

    ok = "ok"
    estimation_failed = "estimation_failed"
    decomposition_failed = "decomposition_failed"
