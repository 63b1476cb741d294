from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Tuple, Union

import sympy as sp

from algebra.rational import fmt, to_fraction

Exponents = Tuple[int, int]
Scalar = Union[int, Fraction]

X, Y = sp.symbols("x y")


def _grlex_key(item):
    (i, j), _ = item
    return (-(i + j), -i)


@dataclass(frozen=True)
class PolyXY:
    """
    Exact bivariate polynomial over the rationals.
    items: ((i, j), coef) pairs, no zero coefficients, graded-lex order.
    """
    items: Tuple[Tuple[Exponents, Fraction], ...] = ()

    # ---------- construction ----------
    @classmethod
    def from_terms(cls, terms: Mapping[Exponents, Any]) -> "PolyXY":
        clean: Dict[Exponents, Fraction] = {}
        for (i, j), c in terms.items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in x^{i} y^{j}")
            c = to_fraction(c)
            if c:
                clean[(int(i), int(j))] = clean.get((int(i), int(j)), Fraction(0)) + c
        return cls(tuple(sorted(((e, c) for e, c in clean.items() if c), key=_grlex_key)))

    @classmethod
    def zero(cls) -> "PolyXY":
        return cls()

    @classmethod
    def monomial(cls, i: int, j: int, coef: Any = 1) -> "PolyXY":
        return cls.from_terms({(i, j): coef})

    @classmethod
    def parse(cls, text: str) -> "PolyXY":
        """Polynomial in x, y from an expression string, e.g. "4*x**3 + x*y**4"."""
        expr = sp.sympify(text, locals={"x": X, "y": Y}, rational=True)
        return cls.from_sympy(expr)

    @classmethod
    def from_sympy(cls, expr) -> "PolyXY":
        expr = sp.expand(expr)
        if expr == 0:
            return cls()
        poly = sp.Poly(expr, X, Y, domain="QQ")
        return cls.from_terms({mon: to_fraction(c) for mon, c in poly.terms()})

    @classmethod
    def from_records(cls, records: List[Mapping[str, Any]]) -> "PolyXY":
        """[{"coef": "num/den", "dx": i, "dy": j}, ...] -> PolyXY; repeated monomials add up."""
        terms: Dict[Exponents, Fraction] = {}
        for rec in records:
            key = (int(rec["dx"]), int(rec["dy"]))
            terms[key] = terms.get(key, Fraction(0)) + to_fraction(rec["coef"])
        return cls.from_terms(terms)

    # ---------- views ----------
    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self.items)

    def __iter__(self) -> Iterator[Tuple[Exponents, Fraction]]:
        return iter(self.items)

    def __len__(self) -> int:
        return len(self.items)

    @property
    def is_zero(self) -> bool:
        return not self.items

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def to_sympy(self):
        return sum((sp.Rational(c.numerator, c.denominator) * X**i * Y**j for (i, j), c in self.items),
                   sp.Integer(0))

    def to_records(self) -> List[Dict[str, Any]]:
        return [{"coef": fmt(c), "dx": i, "dy": j} for (i, j), c in self.items]

    def __str__(self) -> str:
        return str(self.to_sympy()) if self.items else "0"

    # ---------- arithmetic ----------
    def __add__(self, other: "PolyXY") -> "PolyXY":
        terms = self.terms
        for e, c in other.items:
            terms[e] = terms.get(e, Fraction(0)) + c
        return PolyXY.from_terms(terms)

    def __neg__(self) -> "PolyXY":
        return PolyXY(tuple((e, -c) for e, c in self.items))

    def __sub__(self, other: "PolyXY") -> "PolyXY":
        return self + (-other)

    def __mul__(self, other: Union["PolyXY", Scalar]) -> "PolyXY":
        if not isinstance(other, PolyXY):
            k = to_fraction(other)
            return PolyXY.from_terms({e: c * k for e, c in self.items})
        terms: Dict[Exponents, Fraction] = {}
        for (i1, j1), c1 in self.items:
            for (i2, j2), c2 in other.items:
                key = (i1 + i2, j1 + j2)
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return PolyXY.from_terms(terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "PolyXY":
        out = PolyXY.monomial(0, 0)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x, y):
        """Float (or numpy) evaluation; exact when x, y are Fractions."""
        total = 0
        for (i, j), c in self.items:
            coef = c if isinstance(x, Fraction) and isinstance(y, Fraction) else float(c)
            total = total + coef * x**i * y**j
        return total
