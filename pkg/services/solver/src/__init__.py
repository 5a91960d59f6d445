"""LBFGS minimization and run classification."""

from services.solver.src.config import SolverConfig
from services.solver.src.lbfgs import classify, minimize
from services.solver.src.line_search import cubic_interpolate, strong_wolfe
from services.solver.src.models import RunRecord, RunStatus, StopReason

__all__ = [
    "RunRecord",
    "RunStatus",
    "SolverConfig",
    "StopReason",
    "classify",
    "cubic_interpolate",
    "minimize",
    "strong_wolfe",
]
