import json

import pytest

from coordinator.schema import AnalysisOptions, AnalysisOverrides, SystemSpec, load_spec, spec_document
from system import catalog
from system.errors import SpecError

GOOD = """{
  "weight": [1, 1],
  "P": [{"coef": "1", "dx": 1, "dy": 0}, {"coef": "-1", "dx": 0, "dy": 1}],
  "Q": [{"coef": "1", "dx": 1, "dy": 0}, {"coef": "1/2", "dx": 0, "dy": 3}]
}"""


def test_load_good_document():
    spec = load_spec(GOOD)
    P, Q = spec.polynomials()
    assert P.coefficient(0, 1) == -1
    assert str(Q.coefficient(0, 3)) == "1/2"
    assert spec.analysis is None


def test_float_coefficient_names_field_and_line():
    text = GOOD.replace('"coef": "1/2"', '"coef": 0.5')
    with pytest.raises(SpecError) as e:
        load_spec(text)
    assert e.value.field == "Q.1.coef"
    assert e.value.line == 4


def test_decimal_string_coefficient_rejected():
    with pytest.raises(SpecError) as e:
        load_spec(GOOD.replace('"coef": "1/2"', '"coef": "0.5"'))
    assert e.value.field == "Q.1.coef"


@pytest.mark.parametrize("text, field", [
    ('{"weight": [0, 1], "P": [], "Q": []}', "weight"),
    ('{"weight": [1, 1], "P": [], "Q": [], "extra": 1}', "extra"),
    ('{"weight": [1, 1], "P": [{"coef": "1", "dx": -1, "dy": 0}], "Q": []}', "P.0.dx"),
    ('{"weight": [1, 1], "P": []}', "Q"),
])
def test_schema_errors(text, field):
    with pytest.raises(SpecError) as e:
        load_spec(text)
    assert e.value.field == field
    assert e.value.to_dict()["field"] == field


def test_invalid_json_reports_line():
    with pytest.raises(SpecError) as e:
        load_spec('{\n  "weight": [1, 1],\n  "P": [,]\n}')
    assert e.value.line == 3
    assert e.value.field is None


def test_catalog_export_round_trip():
    system = catalog.example1()
    spec = load_spec(json.dumps(spec_document(system)))
    again = spec.to_system()
    assert (again.P, again.Q) == (system.P, system.Q)
    assert again.weight.to_list() == [2, 1]


def test_options_layering():
    doc = AnalysisOverrides(tol=1e-8, grid_points=32, margin=1e-6)
    opts = AnalysisOptions().merged(doc, {"grid_points": 16, "r_min": None, "margin": None})
    assert (opts.tol, opts.grid_points, opts.r_min, opts.margin) == (1e-8, 16, 1e-3, 1e-6)


def test_options_validate_ranges():
    with pytest.raises(ValueError):
        AnalysisOptions(tol=0)
    with pytest.raises(ValueError):
        SystemSpec(weight=[1, 1], P=[], Q=[], analysis={"grid_points": 1})
