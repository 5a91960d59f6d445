"""Restricted path: warm-started solves along the targets f - v * g.

Starting from a tuple l0 with sigma_k(l0) = f - v_lower * g, the parameter
v moves up by ``step_u`` per step and each solve starts from the previous
tuple. The loop stops at the first target the solver cannot reach and
returns the last feasible point.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator

from services.algebra.src import CoordinateRing, check_form
from services.shared.errors import InfeasibleStart
from services.solver.src import RunRecord, SolverConfig, minimize
from services.sosmap.src import ObjectiveContext, distance, sigma

logger = logging.getLogger(__name__)


class PathConfig(BaseModel):
    """Step and bounds for the path parameter v."""

    model_config = ConfigDict(frozen=True)

    step_u: float = Field(..., gt=0, description="Increment of v per step")
    v_lower: float = Field(default=0.0, description="Starting value of v")
    v_upper: float = Field(default=math.inf, description="Largest value of v (may be +inf)")
    solver: SolverConfig = Field(default_factory=SolverConfig.from_settings, description="Per-step solver config")
    max_steps: int = Field(default=10_000, ge=1, description="Cap on the number of solves")

    @model_validator(mode="after")
    def check_bounds(self) -> "PathConfig":
        if math.isnan(self.v_lower) or self.v_lower > self.v_upper:
            raise ValueError(f"need v_lower <= v_upper, got {self.v_lower} > {self.v_upper}")
        return self


class PathResult(BaseModel):
    """Last feasible point of a path run."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    v_final: float = Field(..., description="Last feasible value of v")
    l_final: np.ndarray = Field(..., description="Tuple with sigma_k(l) = f - v_final * g")
    steps: list[RunRecord] = Field(default_factory=list, description="One record per solve")
    v_values: list[float] = Field(default_factory=list, description="Value of v targeted by each solve")
    final_distance: float = Field(..., ge=0, description="Distance at the returned point")
    stop_reason: str = Field(..., description="v_upper, infeasible, max_steps or zero_direction")
    certified: bool | None = Field(default=None, description="Set by the feasibility wrapper")

    @field_serializer("l_final")
    def serialize_tuple(self, value: np.ndarray) -> list[list[float]]:
        return value.tolist()


def restricted_path(
    ring: CoordinateRing, f: np.ndarray, g: np.ndarray, k: int, l0: np.ndarray, cfg: PathConfig
) -> PathResult:
    """Follow f - v * g from v_lower towards v_upper.

    Values of v beyond v_upper are clamped, and the loop ends successfully
    once the solve at v_upper reaches the target.

    Args:
        ring: Coordinate ring
        f: Base form
        g: Direction form
        k: Number of squares
        l0: Tuple with sigma_k(l0) within success_eps of f - v_lower * g
        cfg: Path configuration

    Returns:
        The last feasible (v, l) and every per-step record

    Raises:
        InfeasibleStart: If l0 does not represent f - v_lower * g
    """
    f = check_form(ring, f)
    g = check_form(ring, g)
    eps = cfg.solver.success_eps
    start_ctx = ObjectiveContext(ring=ring, target=f - cfg.v_lower * g, k=k)
    start_distance = distance(start_ctx, l0)
    if start_distance > eps:
        raise InfeasibleStart(f"start tuple is at distance {start_distance:.3e} > {eps:.1e} from f - v_lower * g")

    v, l, last_distance = cfg.v_lower, start_ctx.check(l0), start_distance
    steps: list[RunRecord] = []
    v_values: list[float] = []
    reason = "v_upper" if v >= cfg.v_upper else "max_steps"
    while v < cfg.v_upper and len(steps) < cfg.max_steps:
        v_next = min(v + cfg.step_u, cfg.v_upper)
        ctx = ObjectiveContext(ring=ring, target=f - v_next * g, k=k)
        record = minimize(ctx, l, cfg.solver)
        steps.append(record)
        v_values.append(v_next)
        logger.info(
            f"Path step {len(steps)}: v={v_next:.6g} distance={record.final_distance:.3e} "
            f"status={record.status.value} evals={record.evals}"
        )
        if record.final_distance > eps:
            reason = "infeasible"
            break
        v, l, last_distance = v_next, record.final_tuple, record.final_distance
        if v >= cfg.v_upper:
            reason = "v_upper"

    logger.info(f"Path stopped ({reason}) at v={v:.6g} after {len(steps)} solves")
    return PathResult(
        v_final=v, l_final=l, steps=steps, v_values=v_values, final_distance=last_distance, stop_reason=reason
    )


def sos_feasibility_via_path(
    ring: CoordinateRing,
    f_bar: np.ndarray,
    k: int,
    l0: np.ndarray,
    u: float = 0.05,
    solver_cfg: SolverConfig | None = None,
    max_steps: int = 10_000,
) -> PathResult:
    """Decide whether f_bar is a sum of k squares by a path from sigma_k(l0).

    Uses f = sigma_k(l0), g = f - f_bar and v in [0, 1]; ``u`` is the
    distance the target moves per step, so v grows by u / ||g||. A path
    reaching v = 1 returns a tuple certifying f_bar.

    Returns:
        PathResult with ``certified`` set and ``final_distance`` measured against f_bar
    """
    f_bar = check_form(ring, f_bar)
    solver_cfg = solver_cfg or SolverConfig.from_settings()
    ctx = ObjectiveContext(ring=ring, target=f_bar, k=k)
    l0 = ctx.check(l0)
    f = sigma(ring, l0)
    g = f - f_bar
    g_norm = float(np.linalg.norm(g))
    if g_norm <= solver_cfg.success_eps:
        return PathResult(
            v_final=1.0, l_final=l0, final_distance=g_norm, stop_reason="zero_direction", certified=True
        )

    cfg = PathConfig(step_u=u / g_norm, v_lower=0.0, v_upper=1.0, solver=solver_cfg, max_steps=max_steps)
    result = restricted_path(ring, f, g, k, l0, cfg)
    final = distance(ctx, result.l_final)
    certified = result.v_final >= 1.0 and final <= solver_cfg.success_eps
    return result.model_copy(update={"final_distance": final, "certified": certified})
