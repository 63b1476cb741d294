"""
Input and output documents.

Coefficients travel as "num/den" strings so they stay exact; decimal floats are rejected.
"""
import json
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError, field_validator

from algebra.polyxy import PolyXY
from algebra.rational import to_fraction
from dynamics.integrator import DOMAIN_MARGIN
from system.errors import SpecError
from system.vectorfield import QHSystem, Weight, system_from_fields


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class Monomial(_Strict):
    coef: StrictStr
    dx: StrictInt = Field(ge=0)
    dy: StrictInt = Field(ge=0)

    @field_validator("coef")
    @classmethod
    def _exact(cls, v: str) -> str:
        to_fraction(v)
        return v


class AnalysisOverrides(_Strict):
    tol: Optional[float] = Field(default=None, gt=0)
    r_min: Optional[float] = Field(default=None, gt=0)
    r_max: Optional[float] = Field(default=None, gt=0)
    grid_points: Optional[int] = Field(default=None, ge=2)
    quad_tol: Optional[float] = Field(default=None, gt=0)
    margin: Optional[float] = Field(default=None, gt=0)


class AnalysisOptions(_Strict):
    tol: float = Field(default=1e-10, gt=0)
    r_min: float = Field(default=1e-3, gt=0)
    r_max: float = Field(default=1e3, gt=0)
    grid_points: int = Field(default=256, ge=2)
    quad_tol: float = Field(default=1e-10, gt=0)
    seed: int = 20240601
    samples: int = Field(default=200, ge=1)
    margin: float = Field(default=DOMAIN_MARGIN, gt=0)

    def merged(self, *layers: Optional[Union[BaseModel, Dict[str, Any]]]) -> "AnalysisOptions":
        """Later layers win; None values in a layer leave the setting alone."""
        data = self.model_dump()
        for layer in layers:
            if layer is None:
                continue
            items = layer.model_dump() if isinstance(layer, BaseModel) else layer
            data.update({k: v for k, v in items.items() if v is not None})
        return AnalysisOptions(**data)


class SystemSpec(_Strict):
    weight: List[StrictInt] = Field(min_length=2, max_length=2)
    P: List[Monomial]
    Q: List[Monomial]
    analysis: Optional[AnalysisOverrides] = None

    @field_validator("weight")
    @classmethod
    def _positive(cls, v: List[int]) -> List[int]:
        if any(w < 1 for w in v):
            raise ValueError("weights must be positive integers")
        return v

    def polynomials(self) -> Tuple[PolyXY, PolyXY]:
        return (PolyXY.from_records([m.model_dump() for m in self.P]),
                PolyXY.from_records([m.model_dump() for m in self.Q]))

    def to_system(self) -> QHSystem:
        """:raise NotTwoComponents, InvalidWeightedDegree: system out of scope"""
        P, Q = self.polynomials()
        return system_from_fields(P, Q, Weight(*self.weight))

    @classmethod
    def from_system(cls, system: QHSystem, analysis: Optional[AnalysisOverrides] = None) -> "SystemSpec":
        return cls(weight=system.weight.to_list(),
                   P=[Monomial(**r) for r in system.P.to_records()],
                   Q=[Monomial(**r) for r in system.Q.to_records()],
                   analysis=analysis)


def _line_of(text: str, loc: Sequence[Any]) -> Optional[int]:
    """Line of the last string key on the error path, found by walking the keys in order."""
    pos, found = 0, None
    for key in loc:
        if not isinstance(key, str):
            continue
        hit = text.find(json.dumps(key), pos)
        if hit < 0:
            break
        pos, found = hit, hit
    return None if found is None else text.count("\n", 0, found) + 1


def load_spec(text: str) -> SystemSpec:
    """:raise SpecError: naming the offending field and line"""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"invalid JSON: {e.msg}", line=e.lineno) from None
    try:
        return SystemSpec.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        loc = err.get("loc", ())
        path = ".".join(str(p) for p in loc)
        raise SpecError(err.get("msg", "invalid value"), field=path or None, line=_line_of(text, loc)) from None


class AnalysisReport(_Strict):
    context_id: str
    system: Dict[str, Any]
    decomposition: Dict[str, Any]
    radial_coefficients: Dict[str, Any]
    criteria: List[Dict[str, Any]]
    identities: List[Dict[str, Any]]
    certificates: Dict[str, Any] = Field(default_factory=dict)
    cycles: Dict[str, Any]
    options: Dict[str, Any]
    notes: List[str] = Field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(), indent=2, ensure_ascii=False, sort_keys=True)


def spec_document(system: QHSystem) -> Dict[str, Any]:
    """Input document for `system`, as written by the catalog export."""
    return SystemSpec.from_system(system).model_dump(exclude_none=True)


__all__ = ["Monomial", "AnalysisOverrides", "AnalysisOptions", "SystemSpec", "AnalysisReport",
           "load_spec", "spec_document"]
