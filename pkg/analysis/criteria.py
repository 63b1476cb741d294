"""
Uniqueness and existence criteria for X_n + X_m, each producing a CriterionVerdict.

Sign hypotheses are decided exactly by sign_analysis; only the existence criterion
integrates numerically, with a certified error bound.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from algebra.trigpoly import SignReport, TrigPoly, Verdict, from_poly_on_circle, sign_analysis
from analysis.transforms import phi_numerator
from dynamics.quadrature import certified_quadrature
from system.errors import InconclusiveQuadrature, QHCyclesError, ToleranceNotMet
from system.vectorfield import QHSystem, RadialSystem, radial_coefficients

logger = logging.getLogger(__name__)

RETRY_QUAD_TOL = 1e-13


class Status(str, enum.Enum):
    APPLIES = "Applies"
    HYPOTHESIS_FAILS = "HypothesisFails"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class PhiData:
    """Φ = numerator / b_m²; sign(b_m Φ) = sign(numerator)·sign(b_m)."""
    numerator: TrigPoly
    bm: TrigPoly

    @classmethod
    def of(cls, rs: RadialSystem) -> "PhiData":
        return cls(phi_numerator(rs), rs.b_m)


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: str
    status: Status
    conclusion: Dict[str, Any] = field(default_factory=dict)
    evidence: Dict[str, Any] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    @property
    def applies(self) -> bool:
        return self.status is Status.APPLIES

    def to_dict(self) -> Dict[str, Any]:
        return {"criterion": self.criterion, "status": self.status.value, "conclusion": dict(self.conclusion),
                "evidence": dict(self.evidence), "notes": list(self.notes)}


def _stability(sign: int) -> str:
    return "Stable" if sign > 0 else "Unstable"


def _signed_not_zero(report: SignReport) -> bool:
    """Not identically zero and never changes sign (zeros allowed)."""
    return report.verdict not in (Verdict.IDENTICALLY_ZERO, Verdict.CHANGES_SIGN)


def _evidence(expr: TrigPoly, report: SignReport) -> Dict[str, Any]:
    return {"expression": str(expr), "sign": report.to_dict()}


# ---------- uniqueness through Φ ----------
def theorem1(rs: RadialSystem) -> CriterionVerdict:
    bm_report = sign_analysis(rs.b_m)
    phi = PhiData.of(rs)
    evidence = {"b_m": _evidence(rs.b_m, bm_report)}
    if not bm_report.strict:
        return CriterionVerdict("Thm1", Status.HYPOTHESIS_FAILS, evidence=evidence,
                                notes=["b_m has zeros, so Φ = a_n/b_m − (b_n/b_m)′ is undefined there"])
    num_report = sign_analysis(phi.numerator)
    evidence["phi_numerator"] = _evidence(phi.numerator, num_report)
    if not num_report.strict:
        return CriterionVerdict("Thm1", Status.HYPOTHESIS_FAILS, evidence=evidence,
                                notes=[f"Φ-numerator is {num_report.verdict.value}"])
    return CriterionVerdict("Thm1", Status.APPLIES,
                            {"max_cycles": 1, "surrounds_origin": True, "counted_with_multiplicity": True,
                             "stability": _stability(num_report.sign * bm_report.sign)},
                            evidence,
                            ["b_m ≠ 0 is required for Φ to be defined; treated as a hypothesis"])


# ---------- classical criteria ----------
def linear_part_rotation(system: QHSystem) -> Optional[Fraction]:
    """a when (p,q) = (1,1) and X_n = (ax − y, x + ay), else None."""
    if (system.weight.p, system.weight.q) != (1, 1) or system.n != 1:
        return None
    P, Q = system.low.P.terms, system.low.Q.terms
    if set(P) - {(1, 0), (0, 1)} or set(Q) - {(1, 0), (0, 1)}:
        return None
    a = P.get((1, 0), Fraction(0))
    if P.get((0, 1)) != -1 or Q.get((1, 0)) != 1 or Q.get((0, 1), Fraction(0)) != a:
        return None
    return a


def classical_criteria(rs: RadialSystem, system: Optional[QHSystem] = None) -> List[CriterionVerdict]:
    system = system if system is not None else rs.source
    out: List[CriterionVerdict] = []

    e1 = rs.a_m * rs.b_n - rs.a_n * rs.b_m
    r1 = sign_analysis(e1)
    out.append(CriterionVerdict("I", Status.APPLIES if _signed_not_zero(r1) else Status.HYPOTHESIS_FAILS,
                                {"max_cycles": 1, "surrounds_origin": True} if _signed_not_zero(r1) else {},
                                {"a_m b_n - a_n b_m": _evidence(e1, r1)}))

    e2 = rs.b_m * e1
    r2 = sign_analysis(e2)
    out.append(CriterionVerdict("II", Status.APPLIES if _signed_not_zero(r2) else Status.HYPOTHESIS_FAILS,
                                {"max_cycles_surrounding_origin": 2} if _signed_not_zero(r2) else {},
                                {"b_m (a_m b_n - a_n b_m)": _evidence(e2, r2)}))

    a = linear_part_rotation(system) if system is not None else None
    if a is None:
        why = ["needs (p,q) = (1,1) and X_n = (ax − y, x + ay)"]
        out.append(CriterionVerdict("III", Status.NOT_APPLICABLE, notes=why))
        out.append(CriterionVerdict("IV", Status.NOT_APPLICABLE, notes=why))
        return out

    e3 = rs.a_m * rs.b_n - (rs.a_n * rs.b_m).scale(2) - rs.b_m.differentiate()
    r3 = sign_analysis(e3)
    out.append(CriterionVerdict("III", Status.APPLIES if _signed_not_zero(r3) else Status.HYPOTHESIS_FAILS,
                                {"max_cycles_surrounding_origin": 2} if _signed_not_zero(r3) else {},
                                {"a_m b_n - 2 a_n b_m - b_m'": _evidence(e3, r3)}))

    vanishing = {"a_m b_n - 2 a_n b_m - b_m' == 0": e3.is_zero, "b_m (a_m b_n - a_n b_m) == 0": e2.is_zero}
    iv = any(vanishing.values())
    out.append(CriterionVerdict("IV", Status.APPLIES if iv else Status.HYPOTHESIS_FAILS,
                                {"max_cycles_surrounding_origin": 1} if iv else {}, vanishing))
    return out


# ---------- rotation-part corollary ----------
def corollary1(system: QHSystem) -> CriterionVerdict:
    a = linear_part_rotation(system)
    if a is None or system.m < 2:
        return CriterionVerdict("Cor1", Status.NOT_APPLICABLE,
                                notes=["needs n = 1, (p,q) = (1,1), X_1 = (ax − y, x + ay), m ≥ 2"])
    c, s = TrigPoly.cos_theta(), TrigPoly.sin_theta()
    psi = c * from_poly_on_circle(system.high.Q) - s * from_poly_on_circle(system.high.P)
    expr = psi.scale((system.m - 1) * a) + psi.differentiate()
    report = sign_analysis(expr)
    notes = ["uses the factor (m−1)aψ, not the (n−1)aψ variant"]
    evidence = {"a": str(a), "psi": str(psi), "(m-1) a psi + psi'": _evidence(expr, report)}
    if not report.strict:
        return CriterionVerdict("Cor1", Status.HYPOTHESIS_FAILS, evidence=evidence, notes=notes)
    psi_report = sign_analysis(psi)
    evidence["psi_sign"] = psi_report.to_dict()
    conclusion: Dict[str, Any] = {"max_cycles": 1, "surrounds_origin": True, "counted_with_multiplicity": True}
    if psi_report.strict:
        conclusion["stability"] = _stability(report.sign * psi_report.sign)
    else:
        notes.append(f"ψ is {psi_report.verdict.value}; stability left undetermined")
    return CriterionVerdict("Cor1", Status.APPLIES, conclusion, evidence, notes)


# ---------- existence ----------
def _certified_integral(f: Callable[[float], float], quad_tol: float, label: str):
    for tol in (quad_tol, RETRY_QUAD_TOL):
        try:
            res = certified_quadrature(f, tol)
        except ToleranceNotMet as e:
            logger.warning("existence: %s not certified at tol %.0e (%s)", label, tol, e)
            continue
        if abs(res.value) > res.error_bound:
            return res
        logger.warning("existence: |%s| = %.3e does not exceed its bound %.3e at tol %.0e",
                       label, abs(res.value), res.error_bound, tol)
    raise InconclusiveQuadrature(f"sign of {label} could not be certified")


def existence_prop13(rs: RadialSystem, quad_tol: float = 1e-10) -> CriterionVerdict:
    """At least one cycle around the origin if b_n b_m > 0 and ∫a_n/b_n · ∫a_m/b_m < 0."""
    prod = rs.b_n * rs.b_m
    report = sign_analysis(prod)
    evidence: Dict[str, Any] = {"b_n b_m": _evidence(prod, report)}
    if report.verdict is not Verdict.POSITIVE:
        return CriterionVerdict("Prop13", Status.HYPOTHESIS_FAILS, evidence=evidence,
                                notes=["b_n b_m > 0 is read pointwise for every θ"])

    I_n = _certified_integral(lambda t: rs.a_n(t) / rs.b_n(t), quad_tol, "I_n")
    I_m = _certified_integral(lambda t: rs.a_m(t) / rs.b_m(t), quad_tol, "I_m")
    evidence.update({"I_n": I_n.to_dict(), "I_m": I_m.to_dict(),
                     "multiplier_rho_0": math.exp(I_n.value), "multiplier_rho_1": math.exp(-I_m.value)})
    if I_n.value * I_m.value < 0:
        return CriterionVerdict("Prop13", Status.APPLIES,
                                {"min_cycles": 1, "surrounds_origin": True}, evidence)
    return CriterionVerdict("Prop13", Status.HYPOTHESIS_FAILS, evidence=evidence,
                            notes=["I_n · I_m ≥ 0"])


# ---------- registry ----------
Runner = Callable[[QHSystem, RadialSystem, float], List[CriterionVerdict]]

CRITERIA: Dict[str, Dict[str, Any]] = {
    "Thm1":   {"desc": "Φ = a_n/b_m − (b_n/b_m)′ ≠ 0 ⇒ at most one cycle, stability from sign(b_m Φ)",
               "run": lambda sys_, rs, qt: [theorem1(rs)]},
    "I-IV":   {"desc": "classical sign criteria on a_m b_n − a_n b_m and relatives",
               "run": lambda sys_, rs, qt: classical_criteria(rs, sys_)},
    "Cor1":   {"desc": "(m−1)aψ + ψ̇ ≠ 0 for X_1 = (ax − y, x + ay)",
               "run": lambda sys_, rs, qt: [corollary1(sys_)]},
    "Prop13": {"desc": "b_n b_m > 0 and ∫a_n/b_n · ∫a_m/b_m < 0 ⇒ at least one cycle",
               "run": lambda sys_, rs, qt: [existence_prop13(rs, qt)]},
}


def evaluate_all(system: QHSystem, rs: Optional[RadialSystem] = None, quad_tol: float = 1e-10,
                 progress_cb: Optional[Callable[[Dict[str, Any]], None]] = None) -> List[CriterionVerdict]:
    """Every registered criterion in registry order; a criterion that cannot be decided becomes NotApplicable."""
    rs = rs if rs is not None else radial_coefficients(system)
    out: List[CriterionVerdict] = []
    for cid, entry in CRITERIA.items():
        try:
            verdicts = entry["run"](system, rs, quad_tol)
        except QHCyclesError as e:
            logger.warning("criterion %s undecided: %s", cid, e)
            verdicts = [CriterionVerdict(cid, Status.NOT_APPLICABLE, notes=[f"{type(e).__name__}: {e}"])]
        for v in verdicts:
            logger.info("criterion %s: %s", v.criterion, v.status.value)
            if progress_cb:
                progress_cb({"type": "criterion", "data": v.to_dict()})
        out.extend(verdicts)
    return out
