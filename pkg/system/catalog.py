"""
The worked systems: the two examples, the two sharpness families, and a saddle variant
whose b_n changes sign. Each builder returns a QHSystem.
"""
from typing import Callable, Dict

from algebra.polyxy import PolyXY
from system.vectorfield import QHSystem, Weight, system_from_fields


def example1() -> QHSystem:
    """n = 5, m = 6, weight (2, 1)"""
    P = PolyXY.parse("4*x**3 + x*y**4 - (2*x**2 + y**4)*(8*x + y**2)*y")
    Q = PolyXY.parse("3*x**2*y + y**5 + (2*x**2 + y**4)*(x - 4*y**2)")
    return system_from_fields(P, Q, Weight(2, 1))


def example2() -> QHSystem:
    """n = 1, m = 3, weight (1, 1)"""
    P = PolyXY.parse("x - y - x**3 + 5*x**2*y - x*y**2 - y**3")
    Q = PolyXY.parse("x + y + 3*x**3 - x**2*y + 9*x*y**2 - y**3")
    return system_from_fields(P, Q, Weight(1, 1))


def sharp_abel(k: int = 1, l: int = 0) -> QHSystem:
    """
    a_n = 2(k−l), a_m = −2(k−l), b_n = b_m = 1; x² + y² = 1 is a limit cycle.
    Degrees n = 2l + 1, m = 2k + 1.
    """
    if not k > l >= 0:
        raise ValueError("need k > l >= 0")
    rho = PolyXY.parse("x**2 + y**2")
    P = PolyXY.parse("x - y") * rho**l + PolyXY.parse("-(x + y)") * rho**k
    Q = PolyXY.parse("x + y") * rho**l + PolyXY.parse("x - y") * rho**k
    return system_from_fields(P, Q, Weight(1, 1))


def sharp_polar(k: int = 1, l: int = 0) -> QHSystem:
    """
    a_n = 2(k−l), a_m = −2(k−l), b_n = cos²θ, b_m = 1; x² + y² = 1 is a limit cycle.
    X_n is cubic times (x²+y²)^l, so the degrees are n = 2l + 3, m = 2k + 3.
    """
    if not k > l >= 0:
        raise ValueError("need k > l >= 0")
    rho = PolyXY.parse("x**2 + y**2")
    P = PolyXY.parse("x**3 - x**2*y + x*y**2") * rho**l + PolyXY.parse("-(x + y)") * rho**(k + 1)
    Q = PolyXY.parse("x**3 + x**2*y + y**3") * rho**l + PolyXY.parse("x - y") * rho**(k + 1)
    return system_from_fields(P, Q, Weight(1, 1))


def saddle() -> QHSystem:
    """X_1 = (y, x): b_n = cos 2θ changes sign, so small radii reach b_n + b_m r = 0."""
    P = PolyXY.parse("y - (x + y)*(x**2 + y**2)")
    Q = PolyXY.parse("x + (x - y)*(x**2 + y**2)")
    return system_from_fields(P, Q, Weight(1, 1))


CATALOG: Dict[str, Dict[str, object]] = {
    "example1":     {"build": example1, "desc": "weight (2,1), n=5, m=6; classical criteria (I)-(II) fail"},
    "example2":     {"build": example2, "desc": "n=1, m=3; exactly one stable limit cycle"},
    "sharp_abel":   {"build": sharp_abel, "desc": "b_n = b_m = 1 family, unit circle is a limit cycle"},
    "sharp_polar":  {"build": sharp_polar, "desc": "b_n = cos²θ family, unit circle is a limit cycle"},
    "saddle":       {"build": saddle, "desc": "b_n = cos 2θ changes sign; exercises domain exits"},
}


def build(name: str, **kwargs) -> QHSystem:
    builder: Callable[..., QHSystem] = CATALOG[name]["build"]  # type: ignore[assignment]
    return builder(**kwargs)
