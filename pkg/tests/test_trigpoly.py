import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from algebra.polyxy import PolyXY
from algebra.trigpoly import (TrigPoly, Verdict, arith, evaluate_exact, from_poly_on_circle,
                              half_angle_numerator, sign_analysis, wronskian)

c, s = TrigPoly.cos_theta(), TrigPoly.sin_theta()

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def trigpolys(draw, max_degree=3):
    d = draw(st.integers(0, max_degree))
    return TrigPoly(draw(fractions),
                    tuple(draw(fractions) for _ in range(d)),
                    tuple(draw(fractions) for _ in range(d)))


# ---------- arithmetic ----------
def test_pythagoras_is_exactly_one():
    assert c * c + s * s == TrigPoly.const(1)


def test_product_to_sum():
    assert c * c == TrigPoly(Fraction(1, 2), (0, Fraction(1, 2)), (0, 0))
    assert s * c == TrigPoly.harmonic(2, sin_coef=Fraction(1, 2))


def test_canonical_form_strips_trailing_harmonics():
    f = TrigPoly(1, (2, 0, 0), (0, 0, 0))
    assert f.degree == 1
    assert f == TrigPoly(1, (2,), (0,))
    assert (f - f).is_zero


def test_arith_dispatch_and_unknown_op():
    assert arith(c, s, "add") == c + s
    assert arith(c, 3, "scale") == c.scale(3)
    with pytest.raises(ValueError):
        arith(c, s, "div")


def test_differentiate_harmonic():
    f = TrigPoly.harmonic(3, cos_coef=2, sin_coef=5)
    assert f.differentiate() == TrigPoly.harmonic(3, cos_coef=15, sin_coef=-6)


def test_wronskian_of_cos_sin():
    assert wronskian(c, s) == TrigPoly.const(1)
    assert wronskian(s, s).is_zero


def test_value_at_pi_is_exact():
    f = TrigPoly(1, (2, 3), (7, 7))
    assert f.value_at_pi() == 1 - 2 + 3


def test_from_poly_on_circle_matches_evaluation():
    p = PolyXY.parse("x**3 - 2*x*y + y**4/3")
    f = from_poly_on_circle(p)
    theta = np.linspace(0, 2 * math.pi, 17)
    np.testing.assert_allclose(f(theta), p(np.cos(theta), np.sin(theta)), atol=1e-13)


@given(trigpolys(), trigpolys())
def test_product_evaluates_pointwise(f, g):
    theta = np.linspace(0.1, 6.1, 11)
    np.testing.assert_allclose((f * g)(theta), f(theta) * g(theta), rtol=1e-11, atol=1e-11)


def test_serialisation_uses_rational_strings():
    f = TrigPoly(Fraction(1, 3), (Fraction(-2, 5),), (0,))
    d = f.to_dict()
    assert d == {"constant": "1/3", "cos": ["-2/5"], "sin": ["0"]}
    assert TrigPoly.from_dict(d) == f


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        TrigPoly.const(0.5)


# ---------- half-angle form ----------
@given(trigpolys(), st.fractions(min_value=-20, max_value=20, max_denominator=9))
def test_half_angle_numerator_reproduces_values(f, t):
    value = float(evaluate_exact(f, t)) / (1 + float(t) ** 2) ** f.degree
    assert value == pytest.approx(f(2 * math.atan(float(t))), rel=1e-9, abs=1e-9)


def test_half_angle_numerator_of_constant():
    assert half_angle_numerator(TrigPoly.const(3)) == [Fraction(3)]


# ---------- sign analysis ----------
def test_sign_positive_and_negative():
    assert sign_analysis(TrigPoly.const(2) + c).verdict is Verdict.POSITIVE
    assert sign_analysis(-(TrigPoly.const(2) + c)).verdict is Verdict.NEGATIVE


def test_sign_identically_zero():
    assert sign_analysis(TrigPoly.zero()).verdict is Verdict.IDENTICALLY_ZERO


def test_cos_squared_touches_zero_twice():
    rep = sign_analysis(c * c)
    assert rep.verdict is Verdict.NON_NEGATIVE_WITH_ZEROS
    thetas = sorted(z.theta_interval[0] for z in rep.zero_points)
    assert len(thetas) == 2
    assert thetas[0] == pytest.approx(-math.pi / 2, abs=1e-5)
    assert thetas[1] == pytest.approx(math.pi / 2, abs=1e-5)


def test_root_at_pi_is_found_by_exact_evaluation():
    rep = sign_analysis(TrigPoly.const(1) + c)
    assert rep.verdict is Verdict.NON_NEGATIVE_WITH_ZEROS
    assert any(z.t_interval is None and z.theta_interval == (math.pi, math.pi) for z in rep.zero_points)


def test_changes_sign_gives_witnesses_of_both_signs():
    rep = sign_analysis(TrigPoly.harmonic(2, sin_coef=1) - TrigPoly.const(Fraction(1, 2)))
    assert rep.changes_sign
    pos, neg = rep.witnesses
    assert pos.sign == 1 and neg.sign == -1
    f = TrigPoly.harmonic(2, sin_coef=1) - TrigPoly.const(Fraction(1, 2))
    assert f(pos.theta) > 0 > f(neg.theta)


def test_zero_intervals_are_narrow():
    rep = sign_analysis(s)
    for z in rep.zero_points:
        if z.t_interval is not None:
            a, b = z.t_interval
            assert b - a < Fraction(1, 2**20)


@given(trigpolys(max_degree=2))
def test_strict_verdict_agrees_with_dense_sampling(f):
    rep = sign_analysis(f)
    vals = f(np.linspace(0, 2 * math.pi, 2001))
    if rep.verdict is Verdict.POSITIVE:
        assert vals.min() > 0
    elif rep.verdict is Verdict.NEGATIVE:
        assert vals.max() < 0
    elif rep.changes_sign:
        w_pos, w_neg = rep.witnesses
        assert f(w_pos.theta) > 0 and f(w_neg.theta) < 0


@st.composite
def polys(draw, max_degree=3):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, max_degree), st.integers(0, max_degree)),
                                 fractions, max_size=5))
    return PolyXY.from_terms(terms)


CIRCLE = PolyXY.parse("x**2 + y**2 - 1")


def test_circle_restricts_to_zero():
    assert from_poly_on_circle(CIRCLE).is_zero
    assert from_poly_on_circle(PolyXY.parse("(x**3 - y/2) * (x**2 + y**2 - 1)")).is_zero


@given(polys(), polys())
def test_multiples_of_circle_vanish_on_circle(p, q):
    assert from_poly_on_circle(p * CIRCLE).is_zero
    assert from_poly_on_circle(q + p * CIRCLE) == from_poly_on_circle(q)
