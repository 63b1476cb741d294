"""Exception hierarchy shared by every package.

A hypothesis that does not hold is a verdict, not an error; these are raised only
when an operation cannot produce a value at all.
"""
from typing import Any, Dict, Optional, Sequence, Tuple


class QHCyclesError(Exception):
    """Base class for all library errors."""


class InvalidWeightedDegree(QHCyclesError):
    def __init__(self, field: str, exponents: Tuple[int, int], degree: int):
        self.field = field
        self.exponents = exponents
        self.degree = degree
        i, j = exponents
        super().__init__(f"monomial x^{i} y^{j} of {field} implies degree {degree} < 0")


class NotTwoComponents(QHCyclesError):
    def __init__(self, degrees: Sequence[int]):
        self.degrees = list(degrees)
        super().__init__(f"expected exactly 2 quasi-homogeneous components, found {len(self.degrees)} "
                         f"(degrees {self.degrees})")


class CoefficientUndefined(QHCyclesError):
    """b_n or b_m vanishes somewhere, so a quotient by it is not defined."""


class InvalidCurves(QHCyclesError):
    """Auxiliary curves violate λ1 > λ2, λi ≠ 0 or periodicity."""


class SingularJacobian(QHCyclesError):
    pass


class InconclusiveQuadrature(QHCyclesError):
    pass


class ToleranceNotMet(QHCyclesError):
    def __init__(self, value: float, error_bound: float, tol: float):
        self.value = value
        self.error_bound = error_bound
        self.tol = tol
        super().__init__(f"quadrature error bound {error_bound:.3e} exceeds tolerance {tol:.3e}")


class DomainViolationAtStart(QHCyclesError):
    pass


class TrajectoryExit(QHCyclesError):
    """A trajectory stopped before θ = 2π; `exit` is the dynamics.integrator.Exit record."""

    def __init__(self, exit: Any):
        self.exit = exit
        super().__init__(f"trajectory did not complete: {exit}")


class MixedOrientation(QHCyclesError):
    pass


class SpecError(QHCyclesError):
    """Input document error; names the field path and, when known, the line."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if field:
            where.append(f"field '{field}'")
        if line:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)

    def to_dict(self) -> Dict[str, Any]:
        return {"error": str(self), "field": self.field, "line": self.line}
