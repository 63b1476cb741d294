"""
Adaptive integration of dr/dθ = R(θ, r) over one turn, co-integrating ∂R/∂r so the
return-map multiplier comes out of the same solve.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from analysis.transforms import PolarODE
from system.errors import DomainViolationAtStart

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
BLOWUP_RADIUS = 1e12
DOMAIN_MARGIN = 1e-9
METHOD = "DOP853"


class ExitKind(str, enum.Enum):
    COMPLETED = "Completed"
    LEFT_DOMAIN = "LeftDomain"
    BLOWUP = "Blowup"


@dataclass(frozen=True)
class Exit:
    kind: ExitKind
    theta: Optional[float] = None
    r: Optional[float] = None
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "theta": self.theta, "r": self.r, "reason": self.reason}

    def __str__(self) -> str:
        if self.kind is ExitKind.COMPLETED:
            return self.kind.value
        return f"{self.kind.value}(θ={self.theta:.6g}, r={self.r:.6g}: {self.reason})"


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Samples (θ_i, r_i) of one solve; `log_multiplier[i]` is ∫₀^{θ_i} ∂R/∂r.
    Samples are the accepted solver steps unless explicit θ values were requested.
    """
    theta: np.ndarray
    r: np.ndarray
    log_multiplier: np.ndarray
    exit: Exit
    tol: float
    extras: Tuple[float, ...] = field(default=())

    @property
    def completed(self) -> bool:
        return self.exit.kind is ExitKind.COMPLETED

    @property
    def end_radius(self) -> float:
        return float(self.r[-1])

    @property
    def multiplier(self) -> float:
        return float(math.exp(self.log_multiplier[-1]))

    @property
    def samples(self) -> List[Tuple[float, float]]:
        return list(zip(self.theta.tolist(), self.r.tolist()))


def _event(fn: Callable, direction: int) -> Callable:
    fn.terminal = True
    fn.direction = direction
    return fn


def integrate(ode: PolarODE, r0: float, tol: float = 1e-10, *,
              theta_end: float = TWO_PI,
              theta_eval: Optional[Sequence[float]] = None,
              extras: Sequence[Callable[[float, float], float]] = (),
              margin: float = DOMAIN_MARGIN) -> Trajectory:
    """
    Integrate from (0, r0) to θ = theta_end.
    :param extras: integrands g(θ, r) accumulated along the solution, returned in Trajectory.extras
    :return: Trajectory whose exit says whether the turn completed
    """
    r0 = float(r0)
    if not r0 > 0:
        raise DomainViolationAtStart(f"r0 = {r0} is not positive")
    d0, scale0 = float(ode.denominator(0.0, r0)), float(ode.scale(0.0, r0))
    if scale0 == 0.0 or abs(d0) <= margin * scale0:
        raise DomainViolationAtStart(f"(0, {r0}) lies on or within the margin of b_n + b_m r = 0")
    orient = 1.0 if d0 > 0 else -1.0

    def rhs(theta, y):
        R, dR, _ = ode.rates(theta, y[0])
        return [R, dR] + [g(theta, y[0]) for g in extras]

    def domain(theta, y):
        return orient * ode.denominator(theta, y[0]) - margin * ode.scale(theta, y[0])

    def radius(theta, y):
        return y[0]

    def blowup(theta, y):
        return y[0] - BLOWUP_RADIUS

    events = [_event(domain, -1), _event(radius, -1), _event(blowup, 1)]
    kinds = [(ExitKind.LEFT_DOMAIN, "reached b_n + b_m r = 0"),
             (ExitKind.LEFT_DOMAIN, "radius reached 0"),
             (ExitKind.BLOWUP, f"radius exceeded {BLOWUP_RADIUS:g}")]

    sol = solve_ivp(rhs, (0.0, theta_end), [r0, 0.0] + [0.0] * len(extras), method=METHOD,
                    rtol=tol, atol=tol * 1e-2, events=events, t_eval=theta_eval)

    if sol.status == 1:
        hits = [(ev[0], i) for i, ev in enumerate(sol.t_events) if len(ev)]
        theta_x, i = min(hits)
        kind, reason = kinds[i]
        exit = Exit(kind, float(theta_x), float(sol.y_events[i][0][0]), reason)
    elif sol.status == -1:
        theta_x = float(sol.t[-1]) if sol.t.size else 0.0
        r_x = float(sol.y[0][-1]) if sol.t.size else r0
        kind = ExitKind.BLOWUP if r_x > BLOWUP_RADIUS else ExitKind.LEFT_DOMAIN
        exit = Exit(kind, theta_x, r_x, f"solver stopped: {sol.message}")
    else:
        exit = Exit(ExitKind.COMPLETED)
    if exit.kind is not ExitKind.COMPLETED:
        logger.debug("integrate: r0=%.6g stopped early: %s", r0, exit)

    extra_vals = tuple(float(row[-1]) for row in sol.y[2:]) if sol.t.size else ()
    return Trajectory(theta=sol.t, r=sol.y[0], log_multiplier=sol.y[1], exit=exit, tol=tol, extras=extra_vals)
