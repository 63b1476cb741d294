import logging
import math
import warnings
from dataclasses import dataclass
from typing import Any, Callable, Dict

from scipy.integrate import IntegrationWarning, quad

from system.errors import ToleranceNotMet

logger = logging.getLogger(__name__)

QUAD_LIMIT = 500


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_bound: float

    def to_dict(self) -> Dict[str, Any]:
        return {"value": self.value, "error_bound": self.error_bound}


def certified_quadrature(f: Callable[[float], float], tol: float = 1e-10,
                         a: float = 0.0, b: float = 2.0 * math.pi) -> QuadratureResult:
    """
    Adaptive Gauss–Kronrod quadrature of f over [a, b]; the error bound is the nested-rule estimate.
    :raise ToleranceNotMet: when the estimate stays above tol
    """
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(f, a, b, epsabs=tol * 0.1, epsrel=0.0, limit=QUAD_LIMIT)
    for w in caught:
        logger.warning("quadrature: %s", w.message)
    bound = max(float(abserr), 4 * math.ulp(abs(value)) if value else 0.0)
    if bound > tol:
        raise ToleranceNotMet(float(value), bound, tol)
    logger.debug("quadrature: %.15g ± %.2e", value, bound)
    return QuadratureResult(float(value), bound)
