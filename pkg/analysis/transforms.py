"""
Generalized-polar equation dr/dθ = R(θ, r), its Cherkas reduction to an Abel equation
dρ/dτ = α3ρ³ + α2ρ² + α1ρ, and the auxiliary (Dulac-type) functions used with them.

Every evaluable here is vectorised over numpy arrays.
"""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Tuple

import numpy as np

from algebra.trigpoly import TrigPoly, sign_analysis, wronskian
from system.errors import CoefficientUndefined, InvalidCurves
from system.vectorfield import RadialSystem

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

Fn = Callable[..., np.ndarray]


# ---------- polar equation ----------
@dataclass(frozen=True)
class PolarODE:
    """dr/dθ = R(θ, r) = (a_n r + a_m r²) / (b_n + b_m r), on r > 0 off b_n + b_m r = 0."""
    radial: RadialSystem

    @cached_property
    def _stacked(self):
        polys = (self.radial.a_n, self.radial.a_m, self.radial.b_n, self.radial.b_m)
        deg = max(p.degree for p in polys)

        def pad(v):
            return [float(c) for c in v] + [0.0] * (deg - len(v))

        return (np.array([float(p.constant) for p in polys]),
                np.arange(1, deg + 1, dtype=float),
                np.array([pad(p.cos_coeffs) for p in polys]).reshape(4, deg),
                np.array([pad(p.sin_coeffs) for p in polys]).reshape(4, deg))

    def coefficients(self, theta):
        """(a_n, a_m, b_n, b_m) at θ, sharing one set of cos/sin evaluations."""
        c0, k, A, B = self._stacked
        kt = np.multiply.outer(np.asarray(theta, dtype=float), k)
        vals = c0 + np.cos(kt) @ A.T + np.sin(kt) @ B.T
        return vals[..., 0], vals[..., 1], vals[..., 2], vals[..., 3]

    def denominator(self, theta, r):
        _, _, b_n, b_m = self.coefficients(theta)
        return b_n + b_m * r

    def R(self, theta, r):
        a_n, a_m, b_n, b_m = self.coefficients(theta)
        return (a_n * r + a_m * r * r) / (b_n + b_m * r)

    def dR_dr(self, theta, r):
        a_n, a_m, b_n, b_m = self.coefficients(theta)
        d = b_n + b_m * r
        return ((a_n + 2 * a_m * r) * d - (a_n * r + a_m * r * r) * b_m) / (d * d)

    def rates(self, theta, r) -> Tuple[float, float, float]:
        """(R, ∂R/∂r, b_n + b_m r) from one evaluation of the coefficients."""
        a_n, a_m, b_n, b_m = self.coefficients(theta)
        d = b_n + b_m * r
        num = a_n * r + a_m * r * r
        return num / d, ((a_n + 2 * a_m * r) * d - num * b_m) / (d * d), d

    def scale(self, theta, r):
        """Local size of b_n + b_m r, for relative domain margins."""
        _, _, b_n, b_m = self.coefficients(theta)
        return np.abs(b_n) + np.abs(b_m) * np.abs(r)


def polar_equation(rs: RadialSystem) -> PolarODE:
    return PolarODE(rs)


@dataclass(frozen=True)
class PolarField:
    """(dr/dt, dθ/dt) of the generalized-polar system; r > 0 only."""
    radial: RadialSystem

    def prefactor(self, theta):
        rs = self.radial
        c, s = np.cos(theta), np.sin(theta)
        return 1.0 / (rs.p * c * c + rs.q * s * s)

    def _check(self, r):
        if np.any(np.asarray(r) <= 0):
            raise ValueError("polar field is defined for r > 0 only")

    def dr_dt(self, theta, r):
        self._check(r)
        rs = self.radial
        return (rs.a_n(theta) + rs.a_m(theta) * r) * self.prefactor(theta) * np.power(r, 1.0 + rs.exponent)

    def dtheta_dt(self, theta, r):
        self._check(r)
        rs = self.radial
        return (rs.b_n(theta) + rs.b_m(theta) * r) * self.prefactor(theta) * np.power(r, rs.exponent)

    def __call__(self, theta, r):
        return self.dr_dt(theta, r), self.dtheta_dt(theta, r)


def polar_system(rs: RadialSystem) -> PolarField:
    return PolarField(rs)


# ---------- Cherkas / Abel ----------
@dataclass(frozen=True)
class AbelEquation:
    """
    dρ/dτ = S(τ, ρ) = α3ρ³ + α2ρ² + α1ρ, α_i 1-periodic in τ.
    When built by `cherkas`, `numerators` holds the exact TrigPoly numerators in θ
    over the common denominator b_n·b_m, and `radial` the source system.
    """
    alpha3: Fn
    alpha2: Fn
    alpha1: Fn
    radial: Optional[RadialSystem] = field(default=None, compare=False)
    numerators: Optional[Tuple[TrigPoly, TrigPoly, TrigPoly, TrigPoly]] = field(default=None, compare=False)

    @classmethod
    def from_trigpolys(cls, a3: TrigPoly, a2: TrigPoly, a1: TrigPoly) -> "AbelEquation":
        """Coefficients given as trig polys in θ = 2πτ."""
        return cls(lambda t: a3(TWO_PI * np.asarray(t)),
                   lambda t: a2(TWO_PI * np.asarray(t)),
                   lambda t: a1(TWO_PI * np.asarray(t)))

    def S(self, t, x):
        return ((self.alpha3(t) * x + self.alpha2(t)) * x + self.alpha1(t)) * x

    def dS_dx(self, t, x):
        return (3 * self.alpha3(t) * x + 2 * self.alpha2(t)) * x + self.alpha1(t)

    def alphas_direct(self, theta):
        """α3, α2, α1 at θ straight from a_i, b_i and their derivatives, without the TrigPoly numerators."""
        rs = self.radial
        a_n, a_m, b_n, b_m = rs.a_n(theta), rs.a_m(theta), rs.b_n(theta), rs.b_m(theta)
        w = b_m * rs.b_n.differentiate()(theta) - rs.b_m.differentiate()(theta) * b_n
        den = b_n * b_m
        return (TWO_PI * (a_n * b_m - a_m * b_n) / den,
                TWO_PI * (a_m * b_n - 2 * a_n * b_m + w) / den,
                TWO_PI * (a_n * b_m - w) / den)


@dataclass(frozen=True)
class CherkasMap:
    """T(θ, r) = (θ/2π, b_m r/(b_n + b_m r))."""
    radial: RadialSystem

    def __call__(self, theta, r):
        rs = self.radial
        b_m = rs.b_m(theta)
        return theta / TWO_PI, b_m * r / (rs.b_n(theta) + b_m * r)

    def inverse(self, tau, rho):
        rs = self.radial
        theta = TWO_PI * tau
        return theta, rho * rs.b_n(theta) / (rs.b_m(theta) * (1.0 - rho))

    def jacobian(self, theta, r) -> np.ndarray:
        rs = self.radial
        b_n, b_m = rs.b_n(theta), rs.b_m(theta)
        db_n, db_m = rs.b_n.differentiate()(theta), rs.b_m.differentiate()(theta)
        d = b_n + b_m * r
        return np.array([[1.0 / TWO_PI, 0.0],
                         [r * (db_m * b_n - b_m * db_n) / (d * d), b_m * b_n / (d * d)]])


def phi_numerator(rs: RadialSystem) -> TrigPoly:
    """b_m²·Φ = a_n b_m − (ḃ_n b_m − b_n ḃ_m), with Φ = a_n/b_m − (b_n/b_m)′."""
    return rs.a_n * rs.b_m - wronskian(rs.b_m, rs.b_n)


def _require_nonvanishing(name: str, f: TrigPoly) -> None:
    report = sign_analysis(f)
    if not report.strict:
        raise CoefficientUndefined(f"{name} is not strictly signed ({report.verdict.value}); "
                                   f"use the polar equation directly")


def cherkas(rs: RadialSystem) -> AbelEquation:
    _require_nonvanishing("b_n", rs.b_n)
    _require_nonvanishing("b_m", rs.b_m)
    w = wronskian(rs.b_m, rs.b_n)
    num3 = rs.a_n * rs.b_m - rs.a_m * rs.b_n
    num2 = rs.a_m * rs.b_n - (rs.a_n * rs.b_m).scale(2) + w
    num1 = rs.a_n * rs.b_m - w
    den = rs.b_n * rs.b_m

    def coef(num: TrigPoly) -> Fn:
        def alpha(t):
            theta = TWO_PI * np.asarray(t, dtype=float)
            return TWO_PI * num(theta) / den(theta)
        return alpha

    return AbelEquation(coef(num3), coef(num2), coef(num1), radial=rs, numerators=(num3, num2, num1, den))


def cherkas_map(rs: RadialSystem) -> CherkasMap:
    _require_nonvanishing("b_n", rs.b_n)
    _require_nonvanishing("b_m", rs.b_m)
    return CherkasMap(rs)


# ---------- auxiliary functions ----------
@dataclass(frozen=True)
class Curve:
    """A 1-periodic curve x = λ(τ) with its derivative."""
    value: Fn
    derivative: Fn
    label: str = ""

    @classmethod
    def constant(cls, c: float) -> "Curve":
        return cls(lambda t: np.full(np.shape(t), float(c)) if np.ndim(t) else float(c),
                   lambda t: np.zeros(np.shape(t)) if np.ndim(t) else 0.0,
                   label=f"{c}")

    @classmethod
    def from_trigpoly(cls, f: TrigPoly) -> "Curve":
        df = f.differentiate()
        return cls(lambda t: f(TWO_PI * np.asarray(t)),
                   lambda t: TWO_PI * df(TWO_PI * np.asarray(t)),
                   label=str(f))


@dataclass(frozen=True)
class AuxFunction:
    """F(t, x) with closed-form partials; `singular(t, x)` is the distance-like quantity that must stay away from 0."""
    F: Fn
    F_t: Fn
    F_x: Fn
    singular: Fn
    region: str = ""


def abel_aux(lam1: Curve, lam2: Curve, check_samples: int = 257) -> AuxFunction:
    """F(t, x) = −ln|f / (λ1λ2)|, f = (x − λ1)(x − λ2)x."""
    t = np.linspace(0.0, 1.0, check_samples)
    v1, v2 = np.asarray(lam1.value(t), float), np.asarray(lam2.value(t), float)
    if np.any(v1 <= v2):
        raise InvalidCurves("need λ1(t) > λ2(t)")
    if np.any(v1 == 0) or np.any(v2 == 0):
        raise InvalidCurves("need λi(t) ≠ 0")
    if abs(v1[-1] - v1[0]) > 1e-12 or abs(v2[-1] - v2[0]) > 1e-12:
        raise InvalidCurves("need λi(1) = λi(0)")

    def F(t, x):
        l1, l2 = lam1.value(t), lam2.value(t)
        return -np.log(np.abs((x - l1) * (x - l2) * x / (l1 * l2)))

    def F_x(t, x):
        l1, l2 = lam1.value(t), lam2.value(t)
        return -(1.0 / (x - l1) + 1.0 / (x - l2) + 1.0 / x)

    def F_t(t, x):
        l1, l2 = lam1.value(t), lam2.value(t)
        d1, d2 = lam1.derivative(t), lam2.derivative(t)
        return d1 / (x - l1) + d2 / (x - l2) + d1 / l1 + d2 / l2

    def singular(t, x):
        l1, l2 = lam1.value(t), lam2.value(t)
        return np.minimum(np.minimum(np.abs(x - l1), np.abs(x - l2)), np.abs(x))

    return AuxFunction(F, F_t, F_x, singular, region="x ∉ {0, λ1(t), λ2(t)}")


def script_F(rs: RadialSystem) -> AuxFunction:
    """𝓕(θ, r) = −ln|b_m| + ln|b_n + b_m r| − 2 ln|r| − ln 2π, defined on V."""
    report = sign_analysis(rs.b_m)
    if not report.strict:
        raise CoefficientUndefined(f"b_m is not strictly signed ({report.verdict.value})")
    db_n, db_m = rs.b_n.differentiate(), rs.b_m.differentiate()

    def F(theta, r):
        b_m = rs.b_m(theta)
        return (-np.log(np.abs(b_m)) + np.log(np.abs(rs.b_n(theta) + b_m * r))
                - 2 * np.log(np.abs(r)) - math.log(TWO_PI))

    def F_t(theta, r):
        b_m = rs.b_m(theta)
        dm = db_m(theta)
        return -dm / b_m + (db_n(theta) + dm * r) / (rs.b_n(theta) + b_m * r)

    def F_x(theta, r):
        b_m = rs.b_m(theta)
        return b_m / (rs.b_n(theta) + b_m * r) - 2.0 / r

    def singular(theta, r):
        return np.minimum(np.abs(rs.b_n(theta) + rs.b_m(theta) * r), np.abs(r))

    return AuxFunction(F, F_t, F_x, singular, region="V: r > 0, b_n + b_m r ≠ 0")


def zero_aux() -> AuxFunction:
    zero = lambda t, x: np.zeros(np.broadcast(t, x).shape) if np.ndim(t) or np.ndim(x) else 0.0  # noqa: E731
    return AuxFunction(zero, zero, zero, lambda t, x: np.ones(np.broadcast(t, x).shape), region="everywhere")
