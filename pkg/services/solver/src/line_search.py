"""Strong-Wolfe line search with cubic interpolation (bracketing, then zoom)."""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from services.shared.errors import LineSearchFailure

logger = logging.getLogger(__name__)

Evaluate = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass
class LineSearchResult:
    """Accepted step of a line search."""

    step: float
    value: float
    grad: np.ndarray
    evals: int


def cubic_interpolate(
    x1: float, f1: float, g1: float, x2: float, f2: float, g2: float, bounds: tuple[float, float] | None = None
) -> float:
    """Minimizer of the cubic through two points with values and slopes, clamped to bounds."""
    if bounds is not None:
        xmin_bound, xmax_bound = bounds
    else:
        xmin_bound, xmax_bound = (x1, x2) if x1 <= x2 else (x2, x1)
    if x1 == x2:
        return (xmin_bound + xmax_bound) / 2.0

    d1 = g1 + g2 - 3 * (f1 - f2) / (x1 - x2)
    d2_square = d1**2 - g1 * g2
    if d2_square >= 0:
        d2 = math.sqrt(d2_square)
        if x1 <= x2:
            denominator = g2 - g1 + 2 * d2
            min_pos = x2 - (x2 - x1) * ((g2 + d2 - d1) / denominator) if denominator != 0 else x2
        else:
            denominator = g1 - g2 + 2 * d2
            min_pos = x1 - (x1 - x2) * ((g1 + d2 - d1) / denominator) if denominator != 0 else x1
        if not math.isfinite(min_pos):
            return (xmin_bound + xmax_bound) / 2.0
        return min(max(min_pos, xmin_bound), xmax_bound)
    return (xmin_bound + xmax_bound) / 2.0


class _Line:
    """phi(t) = f(x + t d), with step halving on non-finite values.

    A ``budget`` of 0 leaves the number of evaluations unbounded.
    """

    def __init__(self, evaluate: Evaluate, x: np.ndarray, d: np.ndarray, max_halvings: int, budget: int = 0) -> None:
        self.evaluate = evaluate
        self.x = x
        self.d = d
        self.max_halvings = max_halvings
        self.budget = budget
        self.evals = 0

    @property
    def exhausted(self) -> bool:
        return self.budget > 0 and self.evals >= self.budget

    def __call__(self, t: float) -> tuple[float, float, np.ndarray, float]:
        for _ in range(self.max_halvings + 1):
            if self.exhausted:
                raise LineSearchFailure(f"evaluation budget of {self.budget} spent on non-finite trial steps")
            f, g = self.evaluate(self.x + t * self.d)
            self.evals += 1
            if math.isfinite(f) and np.all(np.isfinite(g)):
                return t, f, g, float(g @ self.d)
            logger.warning(f"Non-finite value at step {t:.3e}; halving")
            t /= 2.0
        raise LineSearchFailure(f"objective not finite after {self.max_halvings} step halvings")


def strong_wolfe(
    evaluate: Evaluate,
    x: np.ndarray,
    t: float,
    d: np.ndarray,
    f: float,
    g: np.ndarray,
    gtd: float,
    c1: float = 1e-4,
    c2: float = 0.9,
    tolerance_change: float = 1e-9,
    max_ls: int = 25,
    max_halvings: int = 50,
    budget: int = 0,
) -> LineSearchResult:
    """Find a step along d satisfying the strong Wolfe conditions.

    Args:
        evaluate: Objective-and-gradient oracle on flat vectors
        x: Current point
        t: Initial step
        d: Descent direction (gtd < 0)
        f: Objective at x
        g: Gradient at x
        gtd: Directional derivative g @ d
        c1: Sufficient-decrease constant
        c2: Curvature constant
        tolerance_change: Smallest bracket width relative to the larger bracket end
        max_ls: Trial steps allowed
        max_halvings: Halvings on non-finite trial values
        budget: Evaluations allowed, halvings included; 0 for no limit

    Returns:
        The lowest bracket point found. It may fail the Wolfe tests when the
        trial budget runs out, and it is step 0 when nothing improved on f.

    Raises:
        LineSearchFailure: If trial values stay non-finite after halving
    """
    phi = _Line(evaluate, x, d, max_halvings, budget)
    t, f_new, g_new, gtd_new = phi(t)

    t_prev, f_prev, g_prev, gtd_prev = 0.0, f, g, gtd
    done = False
    ls_iter = 0
    bracket: list[float] = []
    bracket_f: list[float] = []
    bracket_g: list[np.ndarray] = []
    bracket_gtd: list[float] = []
    while ls_iter < max_ls and not phi.exhausted:
        if f_new > f + c1 * t * gtd or (ls_iter > 1 and f_new >= f_prev):
            bracket, bracket_f = [t_prev, t], [f_prev, f_new]
            bracket_g, bracket_gtd = [g_prev, g_new], [gtd_prev, gtd_new]
            break
        if abs(gtd_new) <= -c2 * gtd:
            bracket, bracket_f, bracket_g = [t], [f_new], [g_new]
            done = True
            break
        if gtd_new >= 0:
            bracket, bracket_f = [t_prev, t], [f_prev, f_new]
            bracket_g, bracket_gtd = [g_prev, g_new], [gtd_prev, gtd_new]
            break

        min_step = t + 0.01 * (t - t_prev)
        max_step = t * 10
        tmp = t
        t = cubic_interpolate(t_prev, f_prev, gtd_prev, t, f_new, gtd_new, bounds=(min_step, max_step))
        t_prev, f_prev, g_prev, gtd_prev = tmp, f_new, g_new, gtd_new
        t, f_new, g_new, gtd_new = phi(t)
        ls_iter += 1

    if not bracket:
        bracket, bracket_f = [0.0, t], [f, f_new]
        bracket_g, bracket_gtd = [g, g_new], [gtd, gtd_new]

    insuf_progress = False
    low_pos, high_pos = (0, 1) if bracket_f[0] <= bracket_f[-1] else (1, 0)
    while not done and ls_iter < max_ls and not phi.exhausted:
        if abs(bracket[1] - bracket[0]) <= tolerance_change * max(abs(bracket[0]), abs(bracket[1])):
            break

        t = cubic_interpolate(bracket[0], bracket_f[0], bracket_gtd[0], bracket[1], bracket_f[1], bracket_gtd[1])

        # keep trial points at least 10% of the bracket away from its ends
        eps = 0.1 * (max(bracket) - min(bracket))
        if min(max(bracket) - t, t - min(bracket)) < eps:
            if insuf_progress or t >= max(bracket) or t <= min(bracket):
                t = max(bracket) - eps if abs(t - max(bracket)) < abs(t - min(bracket)) else min(bracket) + eps
                insuf_progress = False
            else:
                insuf_progress = True
        else:
            insuf_progress = False

        t, f_new, g_new, gtd_new = phi(t)
        ls_iter += 1

        if f_new > f + c1 * t * gtd or f_new >= bracket_f[low_pos]:
            bracket[high_pos], bracket_f[high_pos] = t, f_new
            bracket_g[high_pos], bracket_gtd[high_pos] = g_new, gtd_new
            low_pos, high_pos = (0, 1) if bracket_f[0] <= bracket_f[1] else (1, 0)
        else:
            if abs(gtd_new) <= -c2 * gtd:
                done = True
            elif gtd_new * (bracket[high_pos] - bracket[low_pos]) >= 0:
                bracket[high_pos], bracket_f[high_pos] = bracket[low_pos], bracket_f[low_pos]
                bracket_g[high_pos], bracket_gtd[high_pos] = bracket_g[low_pos], bracket_gtd[low_pos]
            bracket[low_pos], bracket_f[low_pos] = t, f_new
            bracket_g[low_pos], bracket_gtd[low_pos] = g_new, gtd_new

    return LineSearchResult(bracket[low_pos], bracket_f[low_pos], bracket_g[low_pos], phi.evals)
