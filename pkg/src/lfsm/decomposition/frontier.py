"""
Existence frontier of the decomposition over an (alpha, H) grid
"""

from typing import Iterable

import polars as pl

from lfsm.core.model import LfsmParams
from lfsm.decomposition.solver import try_solve_coefficients
from lfsm_common.constants import DEFAULT_TOL, FRONTIER_D
from lfsm_common.exceptions import LfsmError
from lfsm_common.log_kit import logger


def scan_existence_frontier(
    alpha_grid: Iterable[float],
    h_grid: Iterable[float],
    t: float = 1.0,
    d: int = FRONTIER_D,
    tol: float = DEFAULT_TOL,
) -> pl.DataFrame:
    """
    Whether the decomposition exists with every ordering constraint for each (alpha, H).

    Failures are data: a failed cell carries the first failing equation "(i', i)" and the reason.

    Returns:
        DataFrame with columns alpha, hurst, regime, exists, failed_equation, reason
    """
    alpha_grid, h_grid = list(alpha_grid), list(h_grid)
    rows = []
    for alpha in alpha_grid:
        for hurst in h_grid:
            row = {"alpha": float(alpha), "hurst": float(hurst), "regime": LfsmParams(alpha, hurst).regime.value}
            try:
                _, report = try_solve_coefficients(float(alpha), float(hurst), float(t), int(d), float(tol))
            except LfsmError as e:
                row |= {"exists": False, "failed_equation": None, "reason": e.message}
            else:
                eq = report.failed_equation
                row |= {
                    "exists": report.ok,
                    "failed_equation": f"({eq[0]}, {eq[1]})" if eq else None,
                    "reason": report.frontier_violation,
                }
            rows.append(row)

    table = pl.DataFrame(rows, schema_overrides={"failed_equation": pl.String, "reason": pl.String})
    n_exists = table["exists"].sum()
    logger.debug(f"Existence scan d={d}, t={t}: {n_exists}/{table.height} cells solvable")
    return table


def frontier_curve(table: pl.DataFrame) -> pl.DataFrame:
    """
    For each alpha, the smallest grid H from which the decomposition exists for every larger grid H.

    h_min is null when the largest grid H already fails.
    """
    rows = []
    for (alpha,), cell in table.sort("alpha", "hurst").group_by("alpha", maintain_order=True):
        h_min = None
        for hurst, exists in reversed(list(zip(cell["hurst"], cell["exists"]))):
            if not exists:
                break
            h_min = hurst
        rows.append({"alpha": alpha, "h_min": h_min})
    return pl.DataFrame(rows, schema={"alpha": pl.Float64, "h_min": pl.Float64})
