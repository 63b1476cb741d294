import math
from fractions import Fraction

import numpy as np
import pytest

from algebra.trigpoly import TrigPoly
from analysis.transforms import (TWO_PI, AbelEquation, CherkasMap, Curve, abel_aux, cherkas, phi_numerator,
                                 polar_equation, polar_system, script_F)
from system.errors import CoefficientUndefined, InvalidCurves

rng = np.random.default_rng(7)
THETA = rng.uniform(0, TWO_PI, 100)
R = np.exp(rng.uniform(math.log(0.05), math.log(20), 100))


def _fd(fn, a, b, h=1e-6):
    return (fn(a + h, b) - fn(a - h, b)) / (2 * h), (fn(a, b + h) - fn(a, b - h)) / (2 * h)


# ---------- polar equation ----------
def test_sharp_abel_polar_equation(sharp_abel):
    ode = polar_equation(sharp_abel)
    np.testing.assert_allclose(ode.R(THETA, R), (2 * R - 2 * R**2) / (1 + R), rtol=1e-13)
    np.testing.assert_allclose(ode.R(THETA, 1.0), 0.0, atol=1e-15)
    np.testing.assert_allclose(ode.dR_dr(THETA, 1.0), -1.0, rtol=1e-13)


@pytest.mark.parametrize("name", ["ex1", "ex2", "saddle"])
def test_polar_equation_clears_denominator(name, request):
    rs = request.getfixturevalue(name)
    ode = polar_equation(rs)
    lhs = ode.R(THETA, R) * ode.denominator(THETA, R)
    rhs = rs.a_n(THETA) * R + rs.a_m(THETA) * R**2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-9, atol=1e-12)


def test_rates_match_separate_evaluations(ex1):
    ode = polar_equation(ex1)
    R_, dR, d = ode.rates(0.3, 1.7)
    assert R_ == pytest.approx(ode.R(0.3, 1.7))
    assert dR == pytest.approx(ode.dR_dr(0.3, 1.7))
    assert d == pytest.approx(ex1.b_n(0.3) + ex1.b_m(0.3) * 1.7)


def test_dR_dr_matches_finite_difference(ex2):
    ode = polar_equation(ex2)
    fd = (ode.R(THETA, R + 1e-6) - ode.R(THETA, R - 1e-6)) / 2e-6
    np.testing.assert_allclose(ode.dR_dr(THETA, R), fd, rtol=1e-6, atol=1e-6)


def test_polar_system_prefactor_and_orientation(sharp_abel, saddle):
    X = polar_system(sharp_abel)
    assert X.prefactor(0.7) == pytest.approx(1.0)
    assert X.dtheta_dt(0.3, 1.0) == pytest.approx(2.0)
    Y = polar_system(saddle)
    d = saddle.b_n(THETA) + saddle.b_m(THETA) * R
    assert np.all(np.sign(Y.dtheta_dt(THETA, R)) == np.sign(d))
    with pytest.raises(ValueError):
        X.dr_dt(0.0, -1.0)


def test_polar_system_weighted_prefactor(ex1):
    X = polar_system(ex1)
    theta = 0.9
    want = 1 / (2 * math.cos(theta) ** 2 + math.sin(theta) ** 2)
    assert X.prefactor(theta) == pytest.approx(want)


# ---------- Cherkas / Abel ----------
def test_sharp_abel_cherkas_constants(sharp_abel):
    ab = cherkas(sharp_abel)
    t = np.linspace(0, 1, 9)
    np.testing.assert_allclose(ab.alpha3(t), 8 * math.pi)
    np.testing.assert_allclose(ab.alpha2(t), -12 * math.pi)
    np.testing.assert_allclose(ab.alpha1(t), 4 * math.pi)
    np.testing.assert_allclose(ab.S(t, 1.0), 0.0, atol=1e-12)


def test_cherkas_refuses_vanishing_b_n(sharp_polar, saddle):
    with pytest.raises(CoefficientUndefined):
        cherkas(sharp_polar)
    with pytest.raises(CoefficientUndefined):
        cherkas(saddle)


def test_abel_coefficients_two_ways(ex2):
    ab = cherkas(ex2)
    t = rng.uniform(0, 1, 50)
    for got, want in zip((ab.alpha3(t), ab.alpha2(t), ab.alpha1(t)), ab.alphas_direct(TWO_PI * t)):
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_alpha1_numerator_is_phi_numerator(ex2):
    ab = cherkas(ex2)
    assert ab.numerators[2] == phi_numerator(ex2)


def test_cherkas_map_inverse_and_jacobian(ex2):
    cm = CherkasMap(ex2)
    tau, rho = cm(THETA, R)
    th, r = cm.inverse(tau, rho)
    np.testing.assert_allclose(th, THETA, rtol=1e-14)
    np.testing.assert_allclose(r, R, rtol=1e-10)
    J = cm.jacobian(1.1, 0.8)
    d_tau, d_rho = _fd(lambda a, b: np.array(cm(a, b)), 1.1, 0.8)
    np.testing.assert_allclose(J[:, 0], d_tau, rtol=1e-7, atol=1e-9)
    np.testing.assert_allclose(J[:, 1], d_rho, rtol=1e-7, atol=1e-9)


def test_from_trigpolys_is_periodic():
    ab = AbelEquation.from_trigpolys(TrigPoly.cos_theta(), TrigPoly.const(1), TrigPoly.sin_theta())
    assert ab.S(0.2, 0.5) == pytest.approx(ab.S(1.2, 0.5))


# ---------- auxiliary functions ----------
def test_abel_aux_constant_curves():
    F = abel_aux(Curve.constant(1.0), Curve.constant(0.25))
    x = 0.6
    assert F.F(0.3, x) == pytest.approx(-math.log(abs((x - 1) * (x - 0.25) * x / 0.25)))
    assert F.F(0.3, x) == pytest.approx(F.F(1.3, x))


def test_abel_aux_partials_match_finite_differences():
    lam1 = Curve.from_trigpoly(TrigPoly.const(2) + TrigPoly.cos_theta().scale(Fraction(1, 2)))
    lam2 = Curve.constant(-1.0)
    F = abel_aux(lam1, lam2)
    t = rng.uniform(0, 1, 100)
    x = rng.uniform(-0.8, 0.8, 100)
    x = np.where(np.abs(x) < 0.05, 0.5, x)
    for ti, xi in zip(t, x):
        ft, fx = _fd(F.F, ti, xi)
        assert F.F_t(ti, xi) == pytest.approx(ft, rel=1e-6, abs=1e-6)
        assert F.F_x(ti, xi) == pytest.approx(fx, rel=1e-6, abs=1e-6)


@pytest.mark.parametrize("lam1, lam2", [
    (Curve.constant(0.25), Curve.constant(1.0)),
    (Curve.constant(1.0), Curve.constant(0.0)),
    (Curve(lambda t: 1.0 + np.asarray(t), lambda t: np.ones_like(np.asarray(t, float))), Curve.constant(0.25)),
])
def test_abel_aux_rejects_bad_curves(lam1, lam2):
    with pytest.raises(InvalidCurves):
        abel_aux(lam1, lam2)


def test_script_F_sharp_abel(sharp_abel):
    F = script_F(sharp_abel)
    assert F.F(0.4, 2.0) == pytest.approx(math.log(3.0) - 2 * math.log(2.0) - math.log(TWO_PI))
    assert F.F(0.4, 2.0) == pytest.approx(F.F(0.4 + TWO_PI, 2.0))


def test_script_F_partials(ex1):
    F = script_F(ex1)
    for th, r in zip(THETA[:30], R[:30]):
        if abs(ex1.b_n(th) + ex1.b_m(th) * r) < 0.1 * (abs(ex1.b_n(th)) + ex1.b_m(th) * r):
            continue
        ft, fr = _fd(F.F, th, r)
        assert F.F_t(th, r) == pytest.approx(ft, rel=1e-5, abs=1e-5)
        assert F.F_x(th, r) == pytest.approx(fr, rel=1e-5, abs=1e-5)


def test_script_F_needs_nonvanishing_b_m(ex2):
    from system.vectorfield import RadialSystem
    rs = RadialSystem(ex2.a_n, ex2.a_m, ex2.b_n, TrigPoly.cos_theta(), 1, 1, 1, 3)
    with pytest.raises(CoefficientUndefined):
        script_F(rs)
