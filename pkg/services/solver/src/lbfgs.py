"""Limited-memory BFGS on the sum-of-squares distance objective.

Two-loop recursion over at most ``memory`` curvature pairs, strong-Wolfe
line search, and the termination tests used to classify runs:

* distance ``||sigma_k(l) - target|| <= success_eps``
* gradient norm ``<= grad_tol * max(1, ||l||)``
* relative objective decrease ``<= ftol_rel`` on an accepted step
* evaluation cap (line-search trials included) and wall-clock cap

A line search that cannot decrease the objective, even along steepest
descent, ends the run unfinished. It is never counted as convergence.
"""

import logging
import math
import time
from collections import deque

import numpy as np

from services.shared.errors import LineSearchFailure, NonFiniteValue
from services.solver.src.config import SolverConfig
from services.solver.src.line_search import strong_wolfe
from services.solver.src.models import RunRecord, RunStatus, StopReason
from services.sosmap.src import ObjectiveContext, objective_and_gradient

logger = logging.getLogger(__name__)

_CONVERGED = {StopReason.DISTANCE, StopReason.GRADIENT, StopReason.FTOL}


def classify(record: RunRecord, cfg: SolverConfig) -> RunStatus:
    """Successful if the distance is within success_eps, else spurious if converged, else unfinished."""
    if record.final_distance <= cfg.success_eps:
        return RunStatus.SUCCESSFUL
    if record.converged:
        return RunStatus.SPURIOUS
    return RunStatus.UNFINISHED


def _two_loop(grad: np.ndarray, pairs: deque[tuple[np.ndarray, np.ndarray, float]], h_diag: float) -> np.ndarray:
    q = -grad
    alphas = []
    for s, y, rho in reversed(pairs):
        alpha = rho * (s @ q)
        q = q - alpha * y
        alphas.append(alpha)
    r = h_diag * q
    for (s, y, rho), alpha in zip(pairs, reversed(alphas), strict=True):
        beta = rho * (y @ r)
        r = r + (alpha - beta) * s
    return r


def minimize(ctx: ObjectiveContext, l0: np.ndarray, cfg: SolverConfig | None = None) -> RunRecord:
    """Minimize ||sigma_k(l) - target||^2 from l0.

    Accepted objective values never increase. Line-search failures and
    non-finite values end the run with status Unfinished and the
    diagnostic in ``error``; they are not raised.

    Args:
        ctx: Ring, target and number of squares
        l0: Starting k x dim1 tuple
        cfg: Solver configuration; defaults to the environment settings

    Returns:
        The classified run record

    Raises:
        DimensionMismatch: If l0 does not fit the context
    """
    cfg = (cfg or SolverConfig.from_settings()).with_auto_evals(ctx.ring.dim1)
    l0 = ctx.check(l0)
    shape = l0.shape
    eps_sq = cfg.success_eps**2
    start = time.perf_counter()
    evals = 0

    def evaluate(v: np.ndarray) -> tuple[float, np.ndarray]:
        nonlocal evals
        evals += 1
        value, grad = objective_and_gradient(ctx, v.reshape(shape))
        return value, grad.ravel()

    def finish(x: np.ndarray, value: float, reason: StopReason, error: str | None = None) -> RunRecord:
        distance = math.sqrt(value) if math.isfinite(value) else math.inf
        record = RunRecord(
            final_tuple=x.reshape(shape),
            final_distance=distance,
            status=RunStatus.UNFINISHED,
            evals=evals,
            wall_time=time.perf_counter() - start,
            converged=reason in _CONVERGED,
            iterations=iterations,
            objective_history=history,
            stop_reason=reason,
            error=error,
        )
        record.status = classify(record, cfg)
        logger.debug(
            f"LBFGS stopped ({reason.value}) after {iterations} iterations, {evals} evals: "
            f"distance={distance:.3e} status={record.status.value}"
        )
        return record

    x = l0.ravel().copy()
    iterations = 0
    history: list[float] = []
    f, g = evaluate(x)
    if not (math.isfinite(f) and np.all(np.isfinite(g))):
        logger.warning("Objective is not finite at the starting tuple")
        return finish(x, math.inf, StopReason.NON_FINITE, str(NonFiniteValue("objective not finite at l0")))
    history.append(f)
    if f <= eps_sq:
        return finish(x, f, StopReason.DISTANCE)

    pairs: deque[tuple[np.ndarray, np.ndarray, float]] = deque(maxlen=cfg.memory)
    h_diag = 1.0
    while True:
        if np.linalg.norm(g) <= cfg.grad_tol * max(1.0, float(np.linalg.norm(x))):
            return finish(x, f, StopReason.GRADIENT)
        if cfg.max_evals and evals >= cfg.max_evals:
            return finish(x, f, StopReason.MAX_EVALS)
        if cfg.time_limit and time.perf_counter() - start >= cfg.time_limit:
            return finish(x, f, StopReason.TIME_LIMIT)

        d = _two_loop(g, pairs, h_diag) if pairs else -g
        gtd = float(g @ d)
        if gtd >= 0:
            pairs.clear()
            h_diag = 1.0
            d = -g
            gtd = float(g @ d)
        t = min(1.0, 1.0 / float(np.sum(np.abs(g)))) if iterations == 0 else 1.0

        try:
            step = strong_wolfe(
                evaluate,
                x,
                t,
                d,
                f,
                g,
                gtd,
                c1=cfg.c1,
                c2=cfg.c2,
                max_ls=cfg.max_line_search,
                max_halvings=cfg.max_step_halvings,
                budget=cfg.max_evals - evals if cfg.max_evals else 0,
            )
        except LineSearchFailure as e:
            if cfg.max_evals and evals >= cfg.max_evals:
                return finish(x, f, StopReason.MAX_EVALS)
            logger.warning(f"Line search failed after {iterations} iterations: {e}")
            return finish(x, f, StopReason.LINE_SEARCH, str(e))

        if step.step == 0.0 or not step.value < f:
            if cfg.max_evals and evals >= cfg.max_evals:
                return finish(x, f, StopReason.MAX_EVALS)
            if pairs:
                # retry along steepest descent with a fresh history
                pairs.clear()
                h_diag = 1.0
                continue
            error = f"no decrease along steepest descent (f={f:.3e}, |g|={float(np.linalg.norm(g)):.3e})"
            logger.warning(f"Line search stalled after {iterations} iterations: {error}")
            return finish(x, f, StopReason.LINE_SEARCH, error)

        s = step.step * d
        y = step.grad - g
        ys = float(y @ s)
        yy = float(y @ y)
        if ys > np.finfo(float).eps * yy:
            pairs.append((s, y, 1.0 / ys))
            h_diag = ys / yy

        x = x + s
        f_prev, f, g = f, step.value, step.grad
        iterations += 1
        history.append(f)
        if iterations % 50 == 0:
            logger.debug(f"iteration {iterations}: objective={f:.6e} evals={evals}")

        if f <= eps_sq:
            return finish(x, f, StopReason.DISTANCE)
        if f_prev - f <= cfg.ftol_rel * f_prev:
            return finish(x, f, StopReason.FTOL)
