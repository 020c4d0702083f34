"""Codifference-matched decomposition

Cascade solver of the coefficients a_{t,i,j} and the existence scan over (alpha, H)."""

from .frontier import frontier_curve, scan_existence_frontier
from .solver import DecompositionCoeffs, SolveReport, newton_solve_offdiag, solve_coefficients

__all__ = [
    "DecompositionCoeffs",
    "SolveReport",
    "newton_solve_offdiag",
    "solve_coefficients",
    "frontier_curve",
    "scan_existence_frontier",
]
