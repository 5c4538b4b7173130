"""Numerical checks of the inequalities, with seeded sweeps and fixed suites."""
from .kappa import KappaSolverError, conjugate, kappa, kappa_lower_bounds, kappa_solve
from .report import CheckReport, DiscreteRV, equality_report, report
from .suites import SUITES
from .sweeps import SWEEPS, all_passed, summarize

__all__ = [
    "CheckReport", "DiscreteRV", "KappaSolverError", "SUITES", "SWEEPS", "all_passed",
    "conjugate", "equality_report", "kappa", "kappa_lower_bounds", "kappa_solve",
    "report", "summarize",
]
