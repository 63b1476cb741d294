"""
Built-in battery over the worked systems. Each check returns (ok, detail); `quick` skips
the checks that integrate or integrate numerically.
"""
import logging
import math
from typing import Callable, Dict, List, Tuple

from algebra.trigpoly import TrigPoly, Verdict, sign_analysis
from analysis.criteria import Status, classical_criteria, existence_prop13, theorem1
from analysis.identities import (check_abel_transport, check_divergence_transfer_cherkas, check_identity_12,
                                 check_identity_19, check_identity_prop26)
from analysis.transforms import Curve, cherkas, polar_equation
from dynamics.return_map import find_cycles, return_map_derivative
from system import catalog
from system.errors import CoefficientUndefined
from system.vectorfield import radial_coefficients

logger = logging.getLogger(__name__)

Check = Callable[[], Tuple[bool, str]]


# ---------- exact checks ----------
def example1_coefficients() -> Tuple[bool, str]:
    rs = radial_coefficients(catalog.example1())
    c2 = TrigPoly.cos_theta() ** 2
    s4 = TrigPoly.sin_theta() ** 4
    want_b6 = (c2.scale(2) + s4) ** 2
    ok = rs.b_m == want_b6
    return ok, "b_6 = (2cos²θ + sin⁴θ)²" if ok else f"b_6 = {rs.b_m}"


def example1_signs() -> Tuple[bool, str]:
    rs = radial_coefficients(catalog.example1())
    e = rs.a_m * rs.b_n - rs.a_n * rs.b_m
    rep = sign_analysis(e)
    ok = rep.changes_sign and e(math.pi / 2) < 0 < e(5 * math.pi / 4) and theorem1(rs).applies
    return ok, f"a_6b_5 − a_5b_6 {rep.verdict.value}, Thm1 {theorem1(rs).status.value}"


def example2_criteria() -> Tuple[bool, str]:
    rs = radial_coefficients(catalog.example2())
    t1 = theorem1(rs)
    classical = classical_criteria(rs)
    ok = t1.applies and t1.conclusion.get("stability") == "Stable" \
        and all(v.status is Status.HYPOTHESIS_FAILS for v in classical)
    return ok, f"Thm1 {t1.status.value}, (I)-(IV) {[v.status.value for v in classical]}"


def sharp_polar_undefined() -> Tuple[bool, str]:
    try:
        cherkas(radial_coefficients(catalog.sharp_polar()))
    except CoefficientUndefined:
        return True, "cherkas refuses b_n = cos²θ"
    return False, "cherkas accepted a vanishing b_n"


# ---------- numeric checks ----------
def example2_existence() -> Tuple[bool, str]:
    v = existence_prop13(radial_coefficients(catalog.example2()))
    I_n, I_m = v.evidence["I_n"]["value"], v.evidence["I_m"]["value"]
    ok = v.applies and abs(I_n - 4 * math.pi) < 1e-10 and abs(I_m + 4 * math.pi / math.sqrt(3)) < 1e-8
    return ok, f"I_1 = {I_n:.12g}, I_3 = {I_m:.12g}"


def example2_cycle() -> Tuple[bool, str]:
    rep = find_cycles(polar_equation(radial_coefficients(catalog.example2())), grid_points=64)
    ok = len(rep.cycles) == 1 and rep.cycles[0].stability.value == "Stable" and rep.cycles[0].residual < 1e-10
    return ok, f"cycles at {[c.r0 for c in rep.cycles]}"


def _sharp_multiplier(build, k: int, want: float) -> Tuple[bool, str]:
    ode = polar_equation(radial_coefficients(build(k=k, l=0)))
    rep = find_cycles(ode, 1e-2, 1e2, 48)
    if len(rep.cycles) != 1 or abs(rep.cycles[0].r0 - 1) > 1e-8:
        return False, f"cycles at {[c.r0 for c in rep.cycles]}"
    h = return_map_derivative(ode, 1.0)
    return abs(h / want - 1) < 1e-6, f"H'(1) = {h:.10g}, expected {want:.10g}"


def identities() -> Tuple[bool, str]:
    worst = []
    for rs in (radial_coefficients(catalog.example1()), radial_coefficients(catalog.example2())):
        worst.append(check_identity_19(rs))
        worst.append(check_identity_prop26(rs))
    rs = radial_coefficients(catalog.sharp_abel())
    ab = cherkas(rs)
    worst.append(check_identity_12(ab, Curve.constant(1.0), Curve.constant(0.25)))
    worst.append(check_divergence_transfer_cherkas(rs))
    worst.append(check_abel_transport(radial_coefficients(catalog.example2()), 0.5))
    bad = [r.name for r in worst if not r.passed]
    return not bad, "all residuals below tolerance" if not bad else f"failing: {bad}"


CHECKS: Dict[str, Dict[str, object]] = {
    "example1_coefficients": {"run": example1_coefficients, "quick": True},
    "example1_signs":        {"run": example1_signs, "quick": True},
    "example2_criteria":     {"run": example2_criteria, "quick": True},
    "sharp_polar_undefined": {"run": sharp_polar_undefined, "quick": True},
    "example2_existence":    {"run": example2_existence, "quick": False},
    "example2_cycle":        {"run": example2_cycle, "quick": False},
    "sharp_abel_k1":         {"run": lambda: _sharp_multiplier(catalog.sharp_abel, 1, math.exp(-2 * math.pi)),
                              "quick": False},
    "sharp_abel_k2":         {"run": lambda: _sharp_multiplier(catalog.sharp_abel, 2, math.exp(-4 * math.pi)),
                              "quick": False},
    "sharp_polar_k1":        {"run": lambda: _sharp_multiplier(catalog.sharp_polar, 1,
                                                               math.exp(-2 * math.sqrt(2) * math.pi)),
                              "quick": False},
    "sharp_polar_k2":        {"run": lambda: _sharp_multiplier(catalog.sharp_polar, 2,
                                                               math.exp(-4 * math.sqrt(2) * math.pi)),
                              "quick": False},
    "identities":            {"run": identities, "quick": False},
}


def run(quick: bool = False, checks: Dict[str, Dict[str, object]] = CHECKS) -> List[Tuple[str, bool, str]]:
    out = []
    for name, entry in checks.items():
        if quick and not entry["quick"]:
            continue
        try:
            ok, detail = entry["run"]()
        except Exception as e:  # a crashing check is a failing check
            ok, detail = False, f"{type(e).__name__}: {e}"
        logger.info("selftest %s: %s", name, "PASS" if ok else "FAIL")
        out.append((name, ok, detail))
    return out
