"""
Planar polynomial fields split into quasi-homogeneous components, and their radial
coefficients a_i(θ), b_i(θ) in generalized polar coordinates.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.polyxy import PolyXY
from algebra.trigpoly import TrigPoly, from_poly_on_circle
from system.errors import InvalidWeightedDegree, NotTwoComponents

logger = logging.getLogger(__name__)

# radial coefficients are cross-checked against direct evaluation at this many angles
_CONSISTENCY_SAMPLES = 100
_CONSISTENCY_RTOL = 1e-12


@dataclass(frozen=True)
class Weight:
    p: int = 1
    q: int = 1

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q or self.p < 1 or self.q < 1:
            raise ValueError(f"weight must be a pair of positive integers, got ({self.p}, {self.q})")

    def p_degree(self, i: int, j: int) -> int:
        """Degree s a monomial x^i y^j of P belongs to: p·i + q·j = p + s − 1."""
        return self.p * i + self.q * j - self.p + 1

    def q_degree(self, i: int, j: int) -> int:
        """Degree s a monomial x^i y^j of Q belongs to: p·i + q·j = q + s − 1."""
        return self.p * i + self.q * j - self.q + 1

    def to_list(self) -> List[int]:
        return [self.p, self.q]


@dataclass(frozen=True)
class Offending:
    field: str
    exponents: Tuple[int, int]
    weighted_degree: int
    expected: int

    def to_dict(self) -> Dict[str, Any]:
        return {"field": self.field, "dx": self.exponents[0], "dy": self.exponents[1],
                "weighted_degree": self.weighted_degree, "expected": self.expected}


def validate_component(P: PolyXY, Q: PolyXY, w: Weight, s: int) -> Tuple[bool, List[Offending]]:
    """
    Check quasi-homogeneity of (P, Q) with weight w and degree s.
    :return: (valid, offending monomials with their weighted degrees)
    """
    bad = []
    for name, poly, target in (("P", P, w.p + s - 1), ("Q", Q, w.q + s - 1)):
        for (i, j), _ in poly:
            wd = w.p * i + w.q * j
            if wd != target:
                bad.append(Offending(name, (i, j), wd, target))
    return not bad, bad


@dataclass(frozen=True)
class QHComponent:
    P: PolyXY
    Q: PolyXY
    degree: int

    def to_dict(self) -> Dict[str, Any]:
        return {"degree": self.degree, "P": self.P.to_records(), "Q": self.Q.to_records()}


@dataclass(frozen=True)
class QHSystem:
    """dx/dt, dy/dt = X_n + X_m with X_i = (P_i, Q_i) quasi-homogeneous of weight `weight`."""
    weight: Weight
    low: QHComponent
    high: QHComponent

    def __post_init__(self):
        if self.high.degree <= self.low.degree:
            raise ValueError(f"need m > n, got n={self.low.degree}, m={self.high.degree}")
        for comp in (self.low, self.high):
            ok, bad = validate_component(comp.P, comp.Q, self.weight, comp.degree)
            if not ok:
                raise ValueError(f"component of degree {comp.degree} is not quasi-homogeneous: "
                                 f"{[b.to_dict() for b in bad]}")

    @property
    def n(self) -> int:
        return self.low.degree

    @property
    def m(self) -> int:
        return self.high.degree

    @property
    def P(self) -> PolyXY:
        return self.low.P + self.high.P

    @property
    def Q(self) -> PolyXY:
        return self.low.Q + self.high.Q


def decompose(P: PolyXY, Q: PolyXY, w: Weight) -> List[QHComponent]:
    """Group monomials of (P, Q) by quasi-homogeneous degree; sorted by degree."""
    groups: Dict[int, Dict[str, Dict[Tuple[int, int], Fraction]]] = {}
    for name, poly, rule in (("P", P, w.p_degree), ("Q", Q, w.q_degree)):
        for (i, j), c in poly:
            s = rule(i, j)
            if s < 0:
                raise InvalidWeightedDegree(name, (i, j), s)
            groups.setdefault(s, {"P": {}, "Q": {}})[name][(i, j)] = c
    comps = [QHComponent(PolyXY.from_terms(g["P"]), PolyXY.from_terms(g["Q"]), s)
             for s, g in sorted(groups.items())]
    logger.debug("decompose: weight (%d,%d) -> degrees %s", w.p, w.q, [c.degree for c in comps])
    return comps


def make_system(components: Sequence[QHComponent], w: Weight) -> QHSystem:
    if len(components) != 2:
        raise NotTwoComponents([c.degree for c in components])
    low, high = sorted(components, key=lambda c: c.degree)
    return QHSystem(w, low, high)


def system_from_fields(P: PolyXY, Q: PolyXY, w: Weight) -> QHSystem:
    return make_system(decompose(P, Q, w), w)


# ---------- radial coefficients ----------
@dataclass(frozen=True)
class RadialSystem:
    """(a_n, a_m, b_n, b_m) of the generalized-polar form, with (p, q, n, m)."""
    a_n: TrigPoly
    a_m: TrigPoly
    b_n: TrigPoly
    b_m: TrigPoly
    p: int
    q: int
    n: int
    m: int
    source: Optional[QHSystem] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.source is not None:
            _check_against_source(self)

    @property
    def exponent(self) -> float:
        """(n − 1)/(m − n), the r-power in dθ/dt."""
        return (self.n - 1) / (self.m - self.n)

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "q": self.q, "n": self.n, "m": self.m,
                "a_n": self.a_n.to_dict(), "a_m": self.a_m.to_dict(),
                "b_n": self.b_n.to_dict(), "b_m": self.b_m.to_dict()}


def _a_b(comp: QHComponent, w: Weight, gap: int) -> Tuple[TrigPoly, TrigPoly]:
    c, s = TrigPoly.cos_theta(), TrigPoly.sin_theta()
    Pc = from_poly_on_circle(comp.P)
    Qc = from_poly_on_circle(comp.Q)
    a = (c * Pc + s * Qc).scale(gap)
    b = (c * Qc).scale(w.p) - (s * Pc).scale(w.q)
    return a, b


def radial_coefficients(system: QHSystem) -> RadialSystem:
    w = system.weight
    gap = system.m - system.n
    a_n, b_n = _a_b(system.low, w, gap)
    a_m, b_m = _a_b(system.high, w, gap)
    return RadialSystem(a_n, a_m, b_n, b_m, w.p, w.q, system.n, system.m, source=system)


def _check_against_source(rs: RadialSystem) -> None:
    sys_ = rs.source
    theta = np.linspace(0.0, 2 * math.pi, _CONSISTENCY_SAMPLES, endpoint=False) + 0.1234
    c, s = np.cos(theta), np.sin(theta)
    gap = rs.m - rs.n
    for comp, a, b in ((sys_.low, rs.a_n, rs.b_n), (sys_.high, rs.a_m, rs.b_m)):
        P, Q = comp.P(c, s), comp.Q(c, s)
        want_a = gap * (c * P + s * Q)
        want_b = rs.p * c * Q - rs.q * s * P
        for got, want in ((a(theta), want_a), (b(theta), want_b)):
            scale = np.maximum(1.0, np.abs(want))
            if np.max(np.abs(got - want) / scale) > _CONSISTENCY_RTOL * 100:
                raise AssertionError("radial coefficient does not match its defining formula")
