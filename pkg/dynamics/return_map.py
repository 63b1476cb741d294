"""
Return map H(r0) = r(2π; r0) of the polar equation, its multiplier, and the cycle scan.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from scipy.optimize import brentq

from analysis.transforms import AuxFunction, PolarODE
from dynamics.integrator import DOMAIN_MARGIN, TWO_PI, Trajectory, integrate
from system.errors import DomainViolationAtStart, MixedOrientation, TrajectoryExit
from system.vectorfield import RadialSystem

logger = logging.getLogger(__name__)

NEAR_DEGENERATE = 1e-6
SCAN_TOL_FLOOR = 1e-9
# refinement integrates this much tighter than the residual it has to meet
REFINE_FACTOR = 1e-2
MIN_RTOL = 1e-13


class Stability(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    NEAR_DEGENERATE = "NearDegenerate"

    def flipped(self) -> "Stability":
        return {Stability.STABLE: Stability.UNSTABLE,
                Stability.UNSTABLE: Stability.STABLE}.get(self, self)


def classify(multiplier: float, delta: float = NEAR_DEGENERATE) -> Stability:
    if multiplier < 1 - delta:
        return Stability.STABLE
    if multiplier > 1 + delta:
        return Stability.UNSTABLE
    return Stability.NEAR_DEGENERATE


def _turn(ode: PolarODE, r0: float, tol: float, margin: float = DOMAIN_MARGIN) -> Trajectory:
    traj = integrate(ode, r0, tol, margin=margin)
    if not traj.completed:
        raise TrajectoryExit(traj.exit)
    return traj


def return_map(ode: PolarODE, r0: float, tol: float = 1e-10, margin: float = DOMAIN_MARGIN) -> float:
    return _turn(ode, r0, tol, margin).end_radius


def return_map_derivative(ode: PolarODE, r0: float, tol: float = 1e-10, margin: float = DOMAIN_MARGIN) -> float:
    """H′(r0) = exp ∫₀^{2π} ∂R/∂r along the orbit through r0."""
    return _turn(ode, r0, tol, margin).multiplier


# ---------- cycles ----------
@dataclass(frozen=True)
class Cycle:
    r0: float
    multiplier: float
    stability: Stability
    residual: float
    orientation: int
    trajectory: Optional[Trajectory] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {"r0": self.r0, "multiplier": self.multiplier, "stability": self.stability.value,
                "residual": self.residual, "orientation": self.orientation}


@dataclass(frozen=True)
class CycleReport:
    cycles: List[Cycle]
    r_min: float
    r_max: float
    grid_points: int
    tol: float
    skipped: int = 0
    dropped: int = 0
    split: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {"cycles": [c.to_dict() for c in self.cycles],
                "scan": {"r_min": self.r_min, "r_max": self.r_max, "grid_points": self.grid_points,
                         "spacing": "log", "tol": self.tol,
                         "skipped_grid_points": self.skipped, "dropped_brackets": self.dropped,
                         "brackets_across_excluded_curve": self.split}}


def _orientation(ode: PolarODE, traj: Trajectory) -> int:
    d = np.sign(ode.denominator(traj.theta, traj.r))
    if np.all(d > 0):
        return 1
    if np.all(d < 0):
        return -1
    return 0


def _displacement(ode: PolarODE, tol: float, margin: float) -> Callable[[float], float]:
    def g(r: float) -> float:
        return return_map(ode, r, tol, margin) - r
    return g


def _side(ode: PolarODE, r: float, margin: float) -> int:
    """Sign of b_n(0) + b_m(0) r at a start radius, 0 within the margin of the excluded curve."""
    d, scale = float(ode.denominator(0.0, r)), float(ode.scale(0.0, r))
    if scale == 0.0 or abs(d) <= margin * scale:
        return 0
    return 1 if d > 0 else -1


def find_cycles(ode: PolarODE, r_min: float = 1e-3, r_max: float = 1e3,
                grid_points: int = 256, tol: float = 1e-10,
                progress_cb: Optional[Callable[[Dict[str, Any]], None]] = None,
                margin: float = DOMAIN_MARGIN) -> CycleReport:
    """
    Fixed points of H on [r_min, r_max]: sign changes of H(r) − r on a log grid, each refined by brentq.
    Grid points whose trajectories leave the domain are skipped. Neighbours on opposite sides of
    b_n(0) + b_m(0) r = 0 are never bracketed: H(r) − r changes sign there through the pole.
    """
    if not 0 < r_min < r_max:
        raise ValueError(f"need 0 < r_min < r_max, got [{r_min}, {r_max}]")
    scan_tol = max(tol, SCAN_TOL_FLOOR)
    fine_tol = max(tol * REFINE_FACTOR, MIN_RTOL)
    grid = np.geomspace(r_min, r_max, grid_points)
    sides = [_side(ode, float(r), margin) for r in grid]
    coarse = _displacement(ode, scan_tol, margin)
    vals: List[Optional[float]] = []
    for i, r in enumerate(grid):
        if sides[i] == 0:
            logger.debug("find_cycles: grid point r=%.6g skipped (on the excluded curve)", r)
            vals.append(None)
        else:
            try:
                vals.append(coarse(float(r)))
            except (TrajectoryExit, DomainViolationAtStart) as e:
                logger.debug("find_cycles: grid point r=%.6g skipped (%s)", r, e)
                vals.append(None)
        if progress_cb and (i + 1) % 32 == 0:
            progress_cb({"type": "cycle_scan", "data": {"done": i + 1, "total": grid_points}})
    skipped = sum(v is None for v in vals)

    candidates: List[float] = []
    brackets = []
    split = 0
    for i in range(grid_points):
        if vals[i] == 0.0:
            candidates.append(float(grid[i]))
        elif i + 1 < grid_points and vals[i] is not None and vals[i + 1] is not None \
                and vals[i + 1] != 0.0 and (vals[i] > 0) != (vals[i + 1] > 0):
            if sides[i] != sides[i + 1]:
                logger.debug("find_cycles: [%.6g, %.6g] straddles the excluded curve", grid[i], grid[i + 1])
                split += 1
                continue
            brackets.append((float(grid[i]), float(grid[i + 1])))

    fine = _displacement(ode, fine_tol, margin)
    dropped = 0
    for a, b in brackets:
        try:
            candidates.append(brentq(fine, a, b, xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps, maxiter=200))
        except (ValueError, RuntimeError, TrajectoryExit, DomainViolationAtStart) as e:
            logger.warning("find_cycles: bracket [%.6g, %.6g] not refined: %s", a, b, e)
            dropped += 1

    cycles: List[Cycle] = []
    for r in sorted(candidates):
        try:
            traj = _turn(ode, r, fine_tol, margin)
        except (TrajectoryExit, DomainViolationAtStart) as e:
            logger.warning("find_cycles: candidate r0=%.12g dropped: %s", r, e)
            dropped += 1
            continue
        residual = abs(traj.end_radius - r)
        if residual > tol * max(1.0, r):
            logger.warning("find_cycles: candidate r0=%.12g dropped, residual %.3e", r, residual)
            dropped += 1
            continue
        mult = traj.multiplier
        cycles.append(Cycle(r, mult, classify(mult), residual, _orientation(ode, traj), traj))
        logger.info("find_cycles: cycle at r0=%.12g, H'=%.6g", r, mult)

    return CycleReport(cycles, r_min, r_max, grid_points, tol, skipped, dropped, split)


def plane_stability(cycle: Cycle, rs: RadialSystem) -> Stability:
    """Stability of the cycle in the (x, y) plane: as for dr/dθ where dθ/dt > 0, flipped where dθ/dt < 0."""
    traj = cycle.trajectory if cycle.trajectory is not None else _turn(PolarODE(rs), cycle.r0, 1e-10)
    orient = _orientation(PolarODE(rs), traj)
    if orient == 0:
        raise MixedOrientation(f"b_n + b_m r changes sign along the cycle at r0={cycle.r0}")
    return cycle.stability if orient > 0 else cycle.stability.flipped()


# ---------- along-orbit checks ----------
def orbit_integral_identity(ode: PolarODE, cycle: Cycle, aux: AuxFunction,
                            tol: float = 1e-10, margin: float = DOMAIN_MARGIN) -> Dict[str, float]:
    """
    Along a periodic orbit, ∫ ∂R/∂r dθ and ∫ (∂R/∂r + F_θ + F_r R) dθ agree, since F(θ, r(θ)) returns to its start.
    """
    def G(theta, r):
        R, dR, _ = ode.rates(theta, r)
        return dR + aux.F_t(theta, r) + aux.F_x(theta, r) * R

    traj = integrate(ode, cycle.r0, tol, extras=[G], margin=margin)
    if not traj.completed:
        raise TrajectoryExit(traj.exit)
    div = float(traj.log_multiplier[-1])
    g = traj.extras[0]
    return {"divergence_integral": div, "aux_integral": g, "difference": abs(div - g)}


def sample_orbit(ode: PolarODE, r0: float, steps_per_turn: int = 256, tol: float = 1e-10,
                 margin: float = DOMAIN_MARGIN) -> Trajectory:
    """Trajectory sampled at equispaced θ over one turn; stops early on a domain exit."""
    return integrate(ode, r0, tol, theta_eval=np.linspace(0.0, TWO_PI, steps_per_turn + 1), margin=margin)
