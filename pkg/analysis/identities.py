"""
Numeric checkers for the identities behind the auxiliary-function method, and sampled
certificate checkers for the two-curve Abel bound.

Each checker draws its sample points from a seeded generator, so its output is reproducible.
Residuals are relative: |lhs − rhs| / max(1, |lhs|, |rhs|).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from analysis.transforms import (TWO_PI, AbelEquation, AuxFunction, CherkasMap, Curve, PolarODE,
                                 abel_aux, cherkas, cherkas_map, phi_numerator, polar_system, script_F)
from dynamics.integrator import METHOD, integrate
from system.errors import SingularJacobian, TrajectoryExit
from system.vectorfield import RadialSystem

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20240601
SAMPLE_MARGIN = 1e-6
# finite-difference checks keep the stencil well away from singular curves
FD_MARGIN = 1e-2
FD_STEP = 1e-5
SINGULAR_DET = 1e-12
MAX_REDRAWS = 50


@dataclass(frozen=True)
class IdentityResult:
    name: str
    residual: float
    samples: int
    tolerance: float
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.residual < self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "residual": self.residual, "samples": self.samples,
                "tolerance": self.tolerance, "passed": self.passed, **self.detail}


def _relative(lhs, rhs) -> np.ndarray:
    lhs, rhs = np.asarray(lhs, float), np.asarray(rhs, float)
    return np.abs(lhs - rhs) / np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def _draw(rng: np.random.Generator, n: int,
          propose: Callable[[int], Tuple[np.ndarray, np.ndarray]],
          accept: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> Tuple[np.ndarray, np.ndarray]:
    """n points from `propose`, redrawing those `accept` rejects."""
    ts, xs = [], []
    got = 0
    for _ in range(MAX_REDRAWS):
        t, x = propose(n)
        ok = accept(t, x)
        ts.append(t[ok])
        xs.append(x[ok])
        got += int(ok.sum())
        if got >= n:
            return np.concatenate(ts)[:n], np.concatenate(xs)[:n]
    raise ValueError(f"only {got} of {n} samples satisfy the region margin")


def sample_polar_region(rs: RadialSystem, n: int, rng: np.random.Generator,
                        r_range: Tuple[float, float] = (1e-2, 1e2),
                        margin: float = SAMPLE_MARGIN) -> Tuple[np.ndarray, np.ndarray]:
    """(θ, r) uniform in θ, log-uniform in r, with |b_n + b_m r| > margin."""
    ode = PolarODE(rs)
    lo, hi = math.log(r_range[0]), math.log(r_range[1])

    def propose(k):
        return rng.uniform(0.0, TWO_PI, k), np.exp(rng.uniform(lo, hi, k))

    return _draw(rng, n, propose, lambda th, r: np.abs(ode.denominator(th, r)) > margin)


# ---------- Abel auxiliary identity ----------
def check_identity_12(ab: AbelEquation, lam1: Curve, lam2: Curve, samples: int = 200,
                      seed: int = DEFAULT_SEED, x_range: Tuple[float, float] = (-1.5, 2.5),
                      tolerance: float = 1e-9) -> IdentityResult:
    """
    ∂S/∂x + F_t + F_x·S = f·I_L/(λ1 − λ2) with f = (x−λ1)(x−λ2)x,
    I_L = −g1/(λ1(x−λ1)²) + g2/(λ2(x−λ2)²) + W(λ1,λ2)/(λ1λ2(x−λ1)(x−λ2)), g_i = S(t,λi) − λi′.
    """
    aux = abel_aux(lam1, lam2)
    rng = np.random.default_rng(seed)
    t, x = _draw(rng, samples, lambda k: (rng.uniform(0.0, 1.0, k), rng.uniform(*x_range, k)),
                 lambda t, x: aux.singular(t, x) > SAMPLE_MARGIN)

    S = ab.S(t, x)
    lhs = ab.dS_dx(t, x) + aux.F_t(t, x) + aux.F_x(t, x) * S

    l1, l2 = lam1.value(t), lam2.value(t)
    d1, d2 = lam1.derivative(t), lam2.derivative(t)
    g1, g2 = ab.S(t, l1) - d1, ab.S(t, l2) - d2
    w = l1 * d2 - d1 * l2
    u1, u2 = x - l1, x - l2
    I_L = -g1 / (l1 * u1 * u1) + g2 / (l2 * u2 * u2) + w / (l1 * l2 * u1 * u2)
    rhs = u1 * u2 * x * I_L / (l1 - l2)

    res = float(np.max(_relative(lhs, rhs)))
    logger.debug("abel aux identity: residual %.3e over %d samples", res, samples)
    return IdentityResult("abel_aux_identity", res, samples, tolerance)


# ---------- divergence transfer ----------
@dataclass(frozen=True)
class Diffeomorphism:
    """A planar map with its inverse and Jacobian matrix; all take and return scalar pairs."""
    forward: Callable[[float, float], Tuple[float, float]]
    inverse: Callable[[float, float], Tuple[float, float]]
    jacobian: Callable[[float, float], np.ndarray]
    label: str = ""

    @classmethod
    def identity(cls) -> "Diffeomorphism":
        return cls(lambda a, b: (a, b), lambda a, b: (a, b), lambda a, b: np.eye(2), "identity")

    @classmethod
    def rescale(cls) -> "Diffeomorphism":
        """(θ, r) ↦ (θ/2π, r)."""
        return cls(lambda a, b: (a / TWO_PI, b), lambda a, b: (a * TWO_PI, b),
                   lambda a, b: np.diag([1.0 / TWO_PI, 1.0]), "rescale")

    @classmethod
    def from_cherkas(cls, cm: CherkasMap) -> "Diffeomorphism":
        return cls(cm, cm.inverse, cm.jacobian, "cherkas")


Field = Callable[[float, float], Tuple[float, float]]


def _div(field_: Field, a: float, b: float, h: float) -> float:
    return ((field_(a + h, b)[0] - field_(a - h, b)[0]) + (field_(a, b + h)[1] - field_(a, b - h)[1])) / (2 * h)


def _grad(fn: Callable[[float, float], float], a: float, b: float, h: float) -> Tuple[float, float]:
    return (fn(a + h, b) - fn(a - h, b)) / (2 * h), (fn(a, b + h) - fn(a, b - h)) / (2 * h)


def pushforward(T: Diffeomorphism, Q: Field) -> Field:
    """P with P∘T = DT·Q."""
    def P(a, b):
        x = T.inverse(a, b)
        v = T.jacobian(*x) @ np.asarray(Q(*x), float)
        return float(v[0]), float(v[1])
    return P


def divergence_transfer_check(T: Diffeomorphism, F: AuxFunction, Q: Field,
                              points: np.ndarray, h: float = FD_STEP,
                              tolerance: float = 1e-5) -> IdentityResult:
    """
    (div P + D_P F)∘T against div Q + D_Q F̄, with P = T_*Q and F̄ = ln|det DT| + F∘T.
    :param points: (N, 2) sample points in the source plane
    :raise SingularJacobian: when |det DT| < 1e-12 at a sample
    """
    P = pushforward(T, Q)

    def F_bar(a, b):
        return math.log(abs(np.linalg.det(T.jacobian(a, b)))) + float(F.F(*T.forward(a, b)))

    res = []
    for a, b in np.asarray(points, float):
        det = np.linalg.det(T.jacobian(a, b))
        if abs(det) < SINGULAR_DET:
            raise SingularJacobian(f"|det DT| = {abs(det):.3e} at ({a:.6g}, {b:.6g})")
        y = T.forward(a, b)
        Py = P(*y)
        left = _div(P, y[0], y[1], h) + float(F.F_t(*y)) * Py[0] + float(F.F_x(*y)) * Py[1]
        q = Q(a, b)
        ga, gb = _grad(F_bar, a, b, h)
        right = _div(Q, a, b, h) + ga * q[0] + gb * q[1]
        res.append(float(_relative(left, right)))
    worst = max(res) if res else 0.0
    logger.debug("divergence transfer (%s): residual %.3e", T.label, worst)
    return IdentityResult(f"divergence_transfer_{T.label}", worst, len(res), tolerance)


def check_divergence_transfer_cherkas(rs: RadialSystem, eps: float = 0.25, samples: int = 200,
                                      seed: int = DEFAULT_SEED, tolerance: float = 1e-5) -> IdentityResult:
    """The Cherkas map carries (1, R) to (1/2π)(1, S); checked with F built from the curves 1 and ε."""
    cm = cherkas_map(rs)
    ab = cherkas(rs)
    T = Diffeomorphism.from_cherkas(cm)
    F = abel_aux(Curve.constant(1.0), Curve.constant(eps))
    ode = PolarODE(rs)

    def Q(theta, r):
        return 1.0, float(ode.R(theta, r))

    rng = np.random.default_rng(seed)
    lo, hi = math.log(5e-2), math.log(20.0)

    def accept(th, r):
        rho = cm(th, r)[1]
        far = np.minimum(np.minimum(np.abs(rho), np.abs(rho - eps)), np.abs(rho - 1.0))
        return (far > FD_MARGIN) & (np.abs(ode.denominator(th, r)) > FD_MARGIN)

    th, r = _draw(rng, samples, lambda k: (rng.uniform(0.0, TWO_PI, k), np.exp(rng.uniform(lo, hi, k))), accept)
    result = divergence_transfer_check(T, F, Q, np.column_stack([th, r]), tolerance=tolerance)

    P = pushforward(T, Q)
    abel_res = 0.0
    for a, b in zip(th, r):
        tau, rho = cm(a, b)
        abel_res = max(abel_res, float(_relative(TWO_PI * P(tau, rho)[1], ab.S(tau, rho))))
    return IdentityResult(result.name, result.residual, result.samples, tolerance,
                          {"abel_field_residual": abel_res})


# ---------- polar-equation identities ----------
def check_identity_19(rs: RadialSystem, samples: int = 500, seed: int = DEFAULT_SEED,
                      tolerance: float = 1e-8) -> IdentityResult:
    """∂R/∂r + 𝓕_θ + 𝓕_r·R = −b_m Φ/(b_n + b_m r), with b_m Φ = (b_m²Φ)/b_m."""
    aux = script_F(rs)
    ode = PolarODE(rs)
    num = phi_numerator(rs)
    rng = np.random.default_rng(seed)
    th, r = sample_polar_region(rs, samples, rng)

    lhs = ode.dR_dr(th, r) + aux.F_t(th, r) + aux.F_x(th, r) * ode.R(th, r)
    rhs = -num(th) / (rs.b_m(th) * ode.denominator(th, r))
    res = float(np.max(_relative(lhs, rhs)))
    logger.debug("polar aux identity: residual %.3e over %d samples", res, samples)
    return IdentityResult("polar_aux_identity", res, samples, tolerance)


def check_identity_prop26(rs: RadialSystem, samples: int = 200, seed: int = DEFAULT_SEED,
                          h: float = FD_STEP, tolerance: float = 1e-5) -> IdentityResult:
    """div(g·X̄) = −Φ/r² for g = (p cos²θ + q sin²θ)/(b_m r^{2+(n−1)/(m−n)}), X̄ the polar field."""
    script_F(rs)  # b_m must be strictly signed
    X = polar_system(rs)
    num = phi_numerator(rs)
    e = rs.exponent

    def gX(theta, r):
        c, s = math.cos(theta), math.sin(theta)
        g = (rs.p * c * c + rs.q * s * s) / (rs.b_m(theta) * r ** (2.0 + e))
        dr, dth = X(theta, r)
        return float(g * dth), float(g * dr)

    rng = np.random.default_rng(seed)
    lo, hi = math.log(0.2), math.log(5.0)
    th = rng.uniform(0.0, TWO_PI, samples)
    r = np.exp(rng.uniform(lo, hi, samples))
    res = []
    for a, b in zip(th, r):
        div = _div(gX, a, b, h)
        want = -num(a) / (rs.b_m(a) ** 2 * b * b)
        res.append(float(_relative(div, want)))
    worst = max(res)
    logger.debug("weighted divergence identity: residual %.3e", worst)
    return IdentityResult("weighted_divergence_identity", worst, samples, tolerance)


def check_alpha_consistency(ab: AbelEquation, samples: int = 200, seed: int = DEFAULT_SEED,
                            tolerance: float = 1e-12) -> IdentityResult:
    """Abel coefficients from the TrigPoly numerators against the direct formula."""
    rng = np.random.default_rng(seed)
    t = rng.uniform(0.0, 1.0, samples)
    direct = ab.alphas_direct(TWO_PI * t)
    worst = max(float(np.max(_relative(f(t), d))) for f, d in zip((ab.alpha3, ab.alpha2, ab.alpha1), direct))
    return IdentityResult("abel_coefficient_consistency", worst, samples, tolerance)


def check_abel_transport(rs: RadialSystem, r0: float, tol: float = 1e-10,
                         tolerance: float = 1e-6) -> IdentityResult:
    """
    Integrate dr/dθ = R from r0 and dρ/dτ = S from ρ0 = T(0, r0) independently; at every accepted
    step of the polar solve, the Cherkas image of (θ, r) must lie on the Abel solution.
    """
    ab = cherkas(rs)
    cm = CherkasMap(rs)
    traj = integrate(PolarODE(rs), r0, tol)
    if not traj.completed:
        raise TrajectoryExit(traj.exit)
    _, rho0 = cm(0.0, r0)
    tau_end = float(traj.theta[-1]) / TWO_PI
    sol = solve_ivp(lambda t, y: ab.S(t, y), (0.0, tau_end), [float(rho0)], method=METHOD,
                    rtol=tol, atol=tol * 1e-2, dense_output=True)
    tau, rho = cm(traj.theta, traj.r)
    along = sol.sol(tau)[0]
    res = float(np.max(_relative(along, rho)))
    return IdentityResult("abel_transport", res, int(traj.theta.size), tolerance, {"r0": r0})


# ---------- certificates ----------
@dataclass(frozen=True)
class CertificateResult:
    holds: bool
    hypotheses: Dict[str, bool]
    evidence: Dict[str, float]
    samples: int
    conclusion: str

    def to_dict(self) -> Dict[str, Any]:
        return {"holds": self.holds, "hypotheses": dict(self.hypotheses), "evidence": dict(self.evidence),
                "samples": self.samples, "conclusion": self.conclusion, "method": "sampled"}


def _fixed_sign(v: np.ndarray) -> bool:
    tol = 1e-12 * max(1.0, float(np.max(np.abs(v))))
    return bool(np.all(v >= -tol) or np.all(v <= tol))


def two_curve_certificate(ab: AbelEquation, lam1: Curve, lam2: Curve, samples: int = 256) -> CertificateResult:
    """
    Hypotheses of the two-curve bound on the Abel equation, checked on an equispaced τ grid:
    λ1 > λ2, λi ≠ 0, λi periodic, S(τ,λi) − λi′ of fixed sign, 4λ1λ2 g1 g2 + W(λ1,λ2)² ≤ 0.
    """
    t = np.linspace(0.0, 1.0, samples, endpoint=False)
    l1, l2 = np.asarray(lam1.value(t), float), np.asarray(lam2.value(t), float)
    d1, d2 = np.asarray(lam1.derivative(t), float), np.asarray(lam2.derivative(t), float)
    g1, g2 = ab.S(t, l1) - d1, ab.S(t, l2) - d2
    w = l1 * d2 - d1 * l2
    disc = 4 * l1 * l2 * g1 * g2 + w * w
    disc_tol = 1e-12 * max(1.0, float(np.max(np.abs(4 * l1 * l2 * g1 * g2))), float(np.max(w * w)))
    hyp = {
        "ordered": bool(np.all(l1 > l2)),
        "nonzero": bool(np.all(l1 != 0) and np.all(l2 != 0)),
        "periodic": abs(float(lam1.value(1.0)) - float(lam1.value(0.0))) <= 1e-12
                    and abs(float(lam2.value(1.0)) - float(lam2.value(0.0))) <= 1e-12,
        "g1_fixed_sign": _fixed_sign(g1),
        "g2_fixed_sign": _fixed_sign(g2),
        "discriminant_nonpositive": bool(np.all(disc <= disc_tol)),
    }
    holds = all(hyp.values())
    evidence = {"g1_min": float(g1.min()), "g1_max": float(g1.max()),
                "g2_min": float(g2.min()), "g2_max": float(g2.max()),
                "discriminant_max": float(disc.max())}
    conclusion = "at most 2 non-zero limit cycles" if holds else "hypotheses not satisfied"
    return CertificateResult(holds, hyp, evidence, samples, conclusion)


@dataclass(frozen=True)
class EpsSignResult:
    eps: float
    agreement: float
    samples: int

    @property
    def uniform(self) -> bool:
        return self.agreement == 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {"eps": self.eps, "agreement": self.agreement, "uniform": self.uniform, "samples": self.samples}


def eps_sign_check(rs: RadialSystem, eps: float = 0.25, samples: int = 256) -> EpsSignResult:
    """Fraction of τ samples where sgn S(τ, ε) = sgn(ε·(b_m/b_n)·Φ); reported, not thresholded."""
    ab = cherkas(rs)
    num = phi_numerator(rs)
    t = np.linspace(0.0, 1.0, samples, endpoint=False)
    theta = TWO_PI * t
    lhs = np.sign(ab.S(t, eps))
    rhs = np.sign(eps * num(theta) / (rs.b_n(theta) * rs.b_m(theta)))
    agreement = float(np.mean(lhs == rhs))
    if agreement < 1.0:
        logger.info("eps sign check: ε=%g agrees on %.1f%% of samples", eps, 100 * agreement)
    return EpsSignResult(float(eps), agreement, samples)


@dataclass(frozen=True)
class AuxSignResult:
    verdict: str
    minimum: float
    maximum: float
    samples: int
    conclusion: str

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.verdict, "min": self.minimum, "max": self.maximum,
                "samples": self.samples, "conclusion": self.conclusion}


def aux_sign(L: Callable, L_x: Callable, F: AuxFunction, t: np.ndarray, x: np.ndarray) -> AuxSignResult:
    """Sign of G = ∂L/∂x + F_t + F_x·L over the sample points (t, x) of one connected region."""
    G = np.asarray(L_x(t, x) + F.F_t(t, x) + F.F_x(t, x) * L(t, x), float)
    lo, hi = float(G.min()), float(G.max())
    ztol = 1e-12 * max(1.0, abs(lo), abs(hi))
    if abs(lo) <= ztol and abs(hi) <= ztol:
        return AuxSignResult("Zero", lo, hi, G.size, "no conclusion")
    if lo >= -ztol:
        return AuxSignResult("NonNegative", lo, hi, G.size,
                             "at most 1 periodic orbit in the region, hyperbolic and unstable")
    if hi <= ztol:
        return AuxSignResult("NonPositive", lo, hi, G.size,
                             "at most 1 periodic orbit in the region, hyperbolic and stable")
    return AuxSignResult("Mixed", lo, hi, G.size, "no conclusion")


def polar_aux_sign(rs: RadialSystem, samples: int = 200, seed: int = DEFAULT_SEED) -> Dict[str, AuxSignResult]:
    """aux_sign of the polar equation with 𝓕, separately on the parts of V where b_n + b_m r is positive and negative."""
    ode = PolarODE(rs)
    F = script_F(rs)
    th, r = sample_polar_region(rs, samples, np.random.default_rng(seed))
    d = ode.denominator(th, r)
    out: Dict[str, AuxSignResult] = {}
    for name, mask in (("V+", d > 0), ("V-", d < 0)):
        if mask.any():
            out[name] = aux_sign(ode.R, ode.dR_dr, F, th[mask], r[mask])
    return out
