import math
from fractions import Fraction

import numpy as np
import pytest

from algebra.polyxy import PolyXY
from algebra.trigpoly import TrigPoly
from system import catalog
from system.errors import InvalidWeightedDegree, NotTwoComponents
from system.vectorfield import (QHComponent, QHSystem, Weight, decompose, make_system, radial_coefficients,
                                system_from_fields, validate_component)

c, s = TrigPoly.cos_theta(), TrigPoly.sin_theta()
ONE = TrigPoly.const(1)


def test_weight_validation():
    with pytest.raises(ValueError):
        Weight(0, 1)
    assert Weight(2, 1).p_degree(1, 0) == 1


def test_decompose_example1_weight_2_1():
    sys_ = catalog.example1()
    assert (sys_.n, sys_.m) == (5, 6)
    assert sys_.low.P == PolyXY.parse("4*x**3 + x*y**4")
    assert sys_.high.Q == PolyXY.parse("(2*x**2 + y**4)*(x - 4*y**2)")


def test_decompose_groups_by_degree():
    comps = decompose(PolyXY.parse("x + x**3"), PolyXY.parse("y + y**2"), Weight(1, 1))
    assert [cp.degree for cp in comps] == [1, 2, 3]


def test_three_components_is_out_of_scope():
    with pytest.raises(NotTwoComponents) as e:
        system_from_fields(PolyXY.parse("x + x**2 + x**3"), PolyXY.parse("y"), Weight(1, 1))
    assert e.value.degrees == [1, 2, 3]


def test_negative_degree_monomial():
    # weight (1, 2): a constant term of Q has degree q·0 − q + 1 = −1
    with pytest.raises(InvalidWeightedDegree):
        decompose(PolyXY.parse("x"), PolyXY.parse("1 + y"), Weight(1, 2))


def test_validate_component_reports_offenders():
    ok, bad = validate_component(PolyXY.parse("x + x**2"), PolyXY.parse("y"), Weight(1, 1), 1)
    assert not ok
    assert [(b.field, b.exponents, b.weighted_degree) for b in bad] == [("P", (2, 0), 2)]


def test_system_needs_m_greater_than_n():
    low = QHComponent(PolyXY.parse("x**3"), PolyXY.parse("y**3"), 3)
    high = QHComponent(PolyXY.parse("x"), PolyXY.parse("y"), 1)
    with pytest.raises(ValueError):
        QHSystem(Weight(), low, high)
    assert make_system([low, high], Weight()).n == 1


def test_example1_golden_coefficients(ex1):
    g = (c * c).scale(2) + s**4
    assert ex1.a_n == g + (ONE + c * c) * c * c
    assert ex1.a_m == -(g * (TrigPoly.const(8) - (s * s).scale(4) - c**3) * s)
    assert ex1.b_n == g * c * s
    assert ex1.b_m == g * g
    assert (ex1.p, ex1.q, ex1.n, ex1.m) == (2, 1, 5, 6)


def test_example2_golden_coefficients(ex2):
    assert ex2.a_n == TrigPoly.const(2)
    assert ex2.a_m == TrigPoly(-2, (0, 0), (0, 8))
    assert ex2.b_n == ONE
    assert ex2.b_m == TrigPoly(2, (0, 1), (0, 0))


def test_sharpness_families(sharp_abel, sharp_polar):
    assert (sharp_abel.a_n, sharp_abel.a_m) == (TrigPoly.const(2), TrigPoly.const(-2))
    assert sharp_abel.b_n == sharp_abel.b_m == ONE
    assert sharp_polar.b_n == c * c
    assert sharp_polar.b_m == ONE
    assert (sharp_polar.n, sharp_polar.m) == (3, 5)


@pytest.mark.parametrize("k, l", [(1, 0), (2, 0), (2, 1)])
def test_sharp_abel_degrees_and_gap(k, l):
    rs = radial_coefficients(catalog.sharp_abel(k, l))
    assert (rs.n, rs.m) == (2 * l + 1, 2 * k + 1)
    assert rs.a_n == TrigPoly.const(2 * (k - l))


def test_saddle_has_sign_changing_b_n(saddle):
    assert saddle.b_n == TrigPoly.harmonic(2, cos_coef=1)


def test_radial_coefficients_match_definition_off_integer_weights():
    sys_ = catalog.example1()
    rs = radial_coefficients(sys_)
    theta = np.linspace(0, 2 * math.pi, 23)
    cc, ss = np.cos(theta), np.sin(theta)
    P, Q = sys_.high.P(cc, ss), sys_.high.Q(cc, ss)
    np.testing.assert_allclose(rs.b_m(theta), 2 * cc * Q - ss * P, atol=1e-12)


def test_exponent_and_serialisation(ex2):
    assert ex2.exponent == 0
    d = ex2.to_dict()
    assert d["b_m"] == {"constant": "2", "cos": ["0", "1"], "sin": ["0", "0"]}


def test_catalog_build():
    assert catalog.build("sharp_abel", k=2).m == 5
    with pytest.raises(ValueError):
        catalog.sharp_polar(k=0, l=0)
