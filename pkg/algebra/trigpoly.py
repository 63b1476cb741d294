"""
Exact finite Fourier series over the rationals and certified sign analysis on [0, 2π].

Signs are decided through the tangent half-angle substitution t = tan(θ/2):
f(θ) = N(t) / (1 + t²)^d, so the zeros of f on the circle minus θ = π are the real
roots of the rational polynomial N, which Sturm sequences count exactly. θ = π is
checked by evaluating the Fourier form directly.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy as sp

from algebra.polyxy import PolyXY
from algebra.rational import fmt, sign, to_fraction

logger = logging.getLogger(__name__)

# isolating intervals of θ-roots are refined below this width (in t)
ISOLATION_WIDTH = Fraction(1, 2**20)

_T = sp.Symbol("t", real=True)

Scalar = Union[int, Fraction]


def _strip(coeffs: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class TrigPoly:
    """
    constant + Σ_k cos_coeffs[k-1]·cos kθ + sin_coeffs[k-1]·sin kθ, exact rationals.
    Canonical: both tuples padded to `degree`, trailing zero harmonics stripped, so
    equal functions compare equal.
    """
    constant: Fraction = Fraction(0)
    cos_coeffs: Tuple[Fraction, ...] = ()
    sin_coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [to_fraction(v) for v in self.cos_coeffs]
        s = [to_fraction(v) for v in self.sin_coeffs]
        d = max(len(c), len(s))
        c += [Fraction(0)] * (d - len(c))
        s += [Fraction(0)] * (d - len(s))
        while d and c[d - 1] == 0 and s[d - 1] == 0:
            d -= 1
        object.__setattr__(self, "constant", to_fraction(self.constant))
        object.__setattr__(self, "cos_coeffs", tuple(c[:d]))
        object.__setattr__(self, "sin_coeffs", tuple(s[:d]))

    # ---------- constructors ----------
    @classmethod
    def const(cls, c: Scalar) -> "TrigPoly":
        return cls(to_fraction(c))

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls()

    @classmethod
    def harmonic(cls, k: int, cos_coef: Scalar = 0, sin_coef: Scalar = 0) -> "TrigPoly":
        if k == 0:
            return cls(to_fraction(cos_coef))
        c = [Fraction(0)] * k
        s = [Fraction(0)] * k
        c[k - 1] = to_fraction(cos_coef)
        s[k - 1] = to_fraction(sin_coef)
        return cls(Fraction(0), tuple(c), tuple(s))

    @classmethod
    def cos_theta(cls) -> "TrigPoly":
        return cls.harmonic(1, cos_coef=1)

    @classmethod
    def sin_theta(cls) -> "TrigPoly":
        return cls.harmonic(1, sin_coef=1)

    # ---------- views ----------
    @property
    def degree(self) -> int:
        return len(self.cos_coeffs)

    @property
    def is_zero(self) -> bool:
        return self.constant == 0 and self.degree == 0

    def _harmonics(self) -> List[Tuple[Fraction, Fraction]]:
        """[(a_0, 0), (a_1, b_1), ...] with a_0 the constant."""
        return [(self.constant, Fraction(0))] + list(zip(self.cos_coeffs, self.sin_coeffs))

    # ---------- arithmetic ----------
    def __add__(self, other: Union["TrigPoly", Scalar]) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            other = TrigPoly.const(other)
        d = max(self.degree, other.degree)
        a = self._padded(d)
        b = other._padded(d)
        return TrigPoly(self.constant + other.constant,
                        tuple(x + y for x, y in zip(a[0], b[0])),
                        tuple(x + y for x, y in zip(a[1], b[1])))

    __radd__ = __add__

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(-self.constant, tuple(-v for v in self.cos_coeffs), tuple(-v for v in self.sin_coeffs))

    def __sub__(self, other: Union["TrigPoly", Scalar]) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            other = TrigPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "TrigPoly":
        return TrigPoly.const(other) - self

    def __mul__(self, other: Union["TrigPoly", Scalar]) -> "TrigPoly":
        if not isinstance(other, TrigPoly):
            return self.scale(other)
        d = self.degree + other.degree
        acc_c = [Fraction(0)] * (d + 1)
        acc_s = [Fraction(0)] * (d + 1)
        for j, (cj, sj) in enumerate(self._harmonics()):
            if not (cj or sj):
                continue
            for k, (ck, sk) in enumerate(other._harmonics()):
                if not (ck or sk):
                    continue
                hi, lo = j + k, abs(j - k)
                sgn = sign(j - k)
                # product-to-sum
                if cj and ck:
                    v = cj * ck / 2
                    acc_c[hi] += v
                    acc_c[lo] += v
                if sj and sk:
                    v = sj * sk / 2
                    acc_c[lo] += v
                    acc_c[hi] -= v
                if sj and ck:
                    v = sj * ck / 2
                    acc_s[hi] += v
                    acc_s[lo] += sgn * v
                if cj and sk:
                    v = cj * sk / 2
                    acc_s[hi] += v
                    acc_s[lo] -= sgn * v
        return TrigPoly(acc_c[0], tuple(acc_c[1:]), tuple(acc_s[1:]))

    __rmul__ = __mul__

    def scale(self, k: Scalar) -> "TrigPoly":
        k = to_fraction(k)
        return TrigPoly(self.constant * k, tuple(v * k for v in self.cos_coeffs),
                        tuple(v * k for v in self.sin_coeffs))

    def __pow__(self, n: int) -> "TrigPoly":
        out = TrigPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def _padded(self, d: int):
        pad = [Fraction(0)] * (d - self.degree)
        return list(self.cos_coeffs) + pad, list(self.sin_coeffs) + pad

    def differentiate(self) -> "TrigPoly":
        k = range(1, self.degree + 1)
        return TrigPoly(Fraction(0),
                        tuple(n * b for n, b in zip(k, self.sin_coeffs)),
                        tuple(-n * a for n, a in zip(k, self.cos_coeffs)))

    # ---------- evaluation ----------
    @cached_property
    def _float_form(self):
        k = np.arange(1, self.degree + 1, dtype=float)
        return (float(self.constant), k,
                np.array([float(v) for v in self.cos_coeffs]),
                np.array([float(v) for v in self.sin_coeffs]))

    def __call__(self, theta):
        c0, k, a, b = self._float_form
        th = np.asarray(theta, dtype=float)
        if not k.size:
            out = np.full(th.shape, c0)
        else:
            kt = np.multiply.outer(th, k)
            out = c0 + np.cos(kt) @ a + np.sin(kt) @ b
        return float(out) if np.ndim(out) == 0 else out

    def value_at_pi(self) -> Fraction:
        return self.constant + sum((a if k % 2 == 0 else -a for k, a in enumerate(self.cos_coeffs, start=1)),
                                   Fraction(0))

    # ---------- serialisation ----------
    def to_dict(self) -> Dict[str, Any]:
        return {"constant": fmt(self.constant),
                "cos": [fmt(v) for v in self.cos_coeffs],
                "sin": [fmt(v) for v in self.sin_coeffs]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrigPoly":
        return cls(to_fraction(data.get("constant", 0)),
                   tuple(to_fraction(v) for v in data.get("cos", [])),
                   tuple(to_fraction(v) for v in data.get("sin", [])))

    def __str__(self) -> str:
        parts = [fmt(self.constant)] if self.constant else []
        for k, (a, b) in enumerate(zip(self.cos_coeffs, self.sin_coeffs), start=1):
            arg = "θ" if k == 1 else f"{k}θ"
            if a:
                parts.append(f"{fmt(a)}*cos({arg})")
            if b:
                parts.append(f"{fmt(b)}*sin({arg})")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


# ---------- operations ----------
def arith(a: TrigPoly, b: Union[TrigPoly, Scalar], op: str) -> TrigPoly:
    """op ∈ {"add", "sub", "mul", "scale"}; for "scale", b is a rational."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def differentiate(f: TrigPoly) -> TrigPoly:
    return f.differentiate()


def wronskian(f: TrigPoly, g: TrigPoly) -> TrigPoly:
    """W(f, g) = f·g′ − f′·g"""
    return f * g.differentiate() - f.differentiate() * g


@lru_cache(maxsize=None)
def _cos_sin_power(i: int, j: int) -> TrigPoly:
    if i == 0 and j == 0:
        return TrigPoly.const(1)
    if i > 0:
        return _cos_sin_power(i - 1, j) * TrigPoly.cos_theta()
    return _cos_sin_power(0, j - 1) * TrigPoly.sin_theta()


def from_poly_on_circle(p: PolyXY) -> TrigPoly:
    """Exact Fourier form of p(cos θ, sin θ)."""
    out = TrigPoly.zero()
    for (i, j), c in p:
        out = out + _cos_sin_power(i, j).scale(c)
    return out


# ---------- half-angle numerator ----------
def _list_mul(p: List[Fraction], q: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _one_plus_t2(power: int) -> List[Fraction]:
    out = [Fraction(0)] * (2 * power + 1)
    for i in range(power + 1):
        out[2 * i] = Fraction(math.comb(power, i))
    return out


def _exp_ikt(k: int) -> Tuple[List[Fraction], List[Fraction]]:
    """Real and imaginary coefficient lists (low to high) of (1 + i t)^(2k)."""
    re = [Fraction(0)] * (2 * k + 1)
    im = [Fraction(0)] * (2 * k + 1)
    for j in range(2 * k + 1):
        c = math.comb(2 * k, j)
        if j % 2 == 0:
            re[j] = Fraction(c if j % 4 == 0 else -c)
        else:
            im[j] = Fraction(c if j % 4 == 1 else -c)
    return re, im


def half_angle_numerator(f: TrigPoly) -> List[Fraction]:
    """N(t), low to high, with f(θ) = N(tan(θ/2)) / (1 + t²)^deg f."""
    d = f.degree
    n = [Fraction(0)] * (2 * d + 1)
    for k, (a, b) in enumerate(f._harmonics()):
        if not (a or b):
            continue
        re, im = _exp_ikt(k)
        term = [a * r + b * s for r, s in zip(re, im)]
        for i, v in enumerate(_list_mul(term, _one_plus_t2(d - k))):
            n[i] += v
    while len(n) > 1 and n[-1] == 0:
        n.pop()
    return n


def evaluate_exact(f: TrigPoly, t: Fraction) -> Fraction:
    """Exact N(t); sign(N(t)) = sign(f(2·atan t))."""
    return _horner(half_angle_numerator(f), t)


def _horner(coeffs: Sequence[Fraction], t: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


# ---------- sign analysis ----------
class Verdict(str, enum.Enum):
    IDENTICALLY_ZERO = "IdenticallyZero"
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    NON_NEGATIVE_WITH_ZEROS = "NonNegativeWithZeros"
    NON_POSITIVE_WITH_ZEROS = "NonPositiveWithZeros"
    CHANGES_SIGN = "ChangesSign"


@dataclass(frozen=True)
class ZeroPoint:
    """One θ-root. t_interval is None for the root at θ = π."""
    t_interval: Optional[Tuple[Fraction, Fraction]]
    theta_interval: Tuple[float, float]

    def to_dict(self) -> Dict[str, Any]:
        return {"t_interval": None if self.t_interval is None else [fmt(v) for v in self.t_interval],
                "theta_interval": list(self.theta_interval)}


@dataclass(frozen=True)
class Witness:
    theta: float
    sign: int
    t: Optional[Fraction] = None

    def to_dict(self) -> Dict[str, Any]:
        return {"theta": self.theta, "sign": self.sign, "t": None if self.t is None else fmt(self.t)}


@dataclass(frozen=True)
class SignReport:
    verdict: Verdict
    zero_points: Tuple[ZeroPoint, ...] = ()
    witnesses: Tuple[Witness, ...] = ()

    @property
    def strict(self) -> bool:
        return self.verdict in (Verdict.POSITIVE, Verdict.NEGATIVE)

    @property
    def sign(self) -> int:
        """+1 / -1 for a strict verdict, 0 otherwise."""
        return {Verdict.POSITIVE: 1, Verdict.NEGATIVE: -1}.get(self.verdict, 0)

    @property
    def changes_sign(self) -> bool:
        return self.verdict is Verdict.CHANGES_SIGN

    def to_dict(self) -> Dict[str, Any]:
        return {"verdict": self.verdict.value,
                "zero_points": [z.to_dict() for z in self.zero_points],
                "witnesses": [w.to_dict() for w in self.witnesses]}


class _Sturm:
    """Sturm sequence of a square-free rational polynomial, evaluated with Fractions."""

    def __init__(self, coeffs: List[Fraction]):
        poly = sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _T, domain="QQ")
        self.poly = poly.sqf_part()
        self.seq = [[to_fraction(c) for c in reversed(p.all_coeffs())] for p in sp.sturm(self.poly)]

    def variations(self, t: Optional[Fraction], at: int = 0) -> int:
        """Sign variations at t, or at ±∞ when t is None (at = ±1)."""
        if t is None:
            signs = [sign(p[-1]) * (at ** (len(p) - 1)) for p in self.seq]
        else:
            signs = [sign(_horner(p, t)) for p in self.seq]
        signs = [s for s in signs if s]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    def count(self, a: Fraction, b: Fraction) -> int:
        """Number of distinct roots in (a, b]."""
        return self.variations(a) - self.variations(b)

    def value(self, t: Fraction) -> Fraction:
        return _horner(self.seq[0], t)

    def cauchy_bound(self) -> Fraction:
        p = self.seq[0]
        lead = abs(p[-1])
        return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def _isolate(sturm: _Sturm, width: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals (a, b] of every real root, b - a < width, sorted."""
    total = sturm.variations(None, -1) - sturm.variations(None, 1)
    if total == 0:
        return []
    bound = sturm.cauchy_bound()
    stack = [(-bound, bound)]
    found: List[Tuple[Fraction, Fraction]] = []
    while stack:
        a, b = stack.pop()
        n = sturm.count(a, b)
        if n == 0:
            continue
        if n == 1:
            found.append(_refine(sturm, a, b, width))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    found.sort()
    return _separate(sturm, found, width)


def _refine(sturm: _Sturm, a: Fraction, b: Fraction, width: Fraction) -> Tuple[Fraction, Fraction]:
    while b - a >= width:
        mid = (a + b) / 2
        if sturm.value(mid) == 0:
            return mid, mid
        if sturm.count(a, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


def _separate(sturm: _Sturm, found, width):
    """Shrink neighbours until consecutive intervals leave a root-free gap between them."""
    out = list(found)
    for i in range(len(out) - 1):
        while out[i][1] >= out[i + 1][0]:
            a, b = out[i + 1]
            width = min(width, (b - a) / 2) if b > a else width
            if b > a:
                out[i + 1] = _refine(sturm, a, b, width)
            a, b = out[i]
            if b > a:
                out[i] = _refine(sturm, a, b, (b - a) / 2)
            if out[i][0] == out[i][1] and out[i + 1][0] == out[i + 1][1]:
                break
    return out


def _theta(t: Fraction) -> float:
    return 2.0 * math.atan(float(t))


def sign_analysis(f: TrigPoly) -> SignReport:
    """Certified sign verdict of f on the circle, with zero isolation and witnesses."""
    if f.is_zero:
        return SignReport(Verdict.IDENTICALLY_ZERO)

    n = half_angle_numerator(f)
    at_pi = f.value_at_pi()
    zeros: List[ZeroPoint] = []
    probes: List[Witness] = []

    if len(n) == 1:
        roots = []
    else:
        sturm = _Sturm(n)
        roots = _isolate(sturm, ISOLATION_WIDTH)
    for a, b in roots:
        zeros.append(ZeroPoint((a, b), (_theta(a), _theta(b))))

    # one probe inside each root-free gap of the real line, plus θ = π
    if roots:
        gaps = [roots[0][0] - 1]
        gaps += [(roots[i][1] + roots[i + 1][0]) / 2 for i in range(len(roots) - 1)]
        gaps.append(roots[-1][1] + 1)
    else:
        gaps = [Fraction(0)]
    for t in gaps:
        s = sign(_horner(n, t))
        if s:
            probes.append(Witness(_theta(t), s, t))
    if at_pi == 0:
        zeros.append(ZeroPoint(None, (math.pi, math.pi)))
    else:
        probes.append(Witness(math.pi, sign(at_pi)))

    signs = {w.sign for w in probes}
    logger.debug("sign_analysis: degree %d, %d zeros, probe signs %s", f.degree, len(zeros), signs)
    if signs == {1, -1}:
        pos = next(w for w in probes if w.sign > 0)
        neg = next(w for w in probes if w.sign < 0)
        return SignReport(Verdict.CHANGES_SIGN, tuple(zeros), (pos, neg))
    if signs == {1}:
        verdict = Verdict.NON_NEGATIVE_WITH_ZEROS if zeros else Verdict.POSITIVE
    else:
        verdict = Verdict.NON_POSITIVE_WITH_ZEROS if zeros else Verdict.NEGATIVE
    return SignReport(verdict, tuple(zeros))
