import pytest

from coordinator.schema import AnalysisOptions, SystemSpec, load_spec, spec_document
from scheduler import selftest
from scheduler.analysis_scheduler import AnalysisScheduler
from store.memory import ReportStore
from system import catalog
from system.errors import NotTwoComponents

FAST = AnalysisOptions(r_min=0.1, r_max=10, grid_points=16, samples=30)


@pytest.fixture(scope="module")
def ex2_run():
    events = []
    sch = AnalysisScheduler()
    report = sch.dispatch("ex2", catalog.example2(), FAST, progress_cb=events.append)
    return sch, report, events


def test_dispatch_event_sequence(ex2_run):
    _, _, events = ex2_run
    assert events[0] == {"type": "stage_start", "data": {"stage": "decompose"}}
    assert events[1]["data"]["degrees"] == [1, 3]
    assert events[-1]["type"] == "report"
    stages = [e["data"]["stage"] for e in events if e["type"] == "stage_end"]
    for name in ("radial_coefficients", "criteria", "identities", "cycles"):
        assert name in stages
    assert sum(e["type"] == "criterion" for e in events) == 7


def test_dispatch_report_contents(ex2_run):
    _, report, _ = ex2_run
    by_id = {c["criterion"]: c for c in report.criteria}
    assert by_id["Thm1"]["status"] == "Applies"
    assert by_id["Prop13"]["status"] == "Applies"
    names = {i["name"] for i in report.identities}
    assert {"polar_aux_identity", "weighted_divergence_identity", "abel_aux_identity",
            "abel_coefficient_consistency", "abel_transport"} <= names
    assert all(i["passed"] for i in report.identities if i["name"] != "divergence_transfer_cherkas")
    assert report.certificates["polar_aux_sign"]["V+"]["verdict"] == "NonPositive"
    assert report.options["grid_points"] == 16


def test_dispatch_stores_report(ex2_run):
    sch, report, _ = ex2_run
    assert sch.mem.contexts() == ["ex2"]
    assert sch.mem.get("ex2")["report"]["context_id"] == "ex2"


def test_vanishing_b_n_becomes_a_note():
    report = AnalysisScheduler().dispatch("sp", catalog.sharp_polar(), FAST)
    assert any("CoefficientUndefined" in n for n in report.notes)
    assert "two_curve" not in report.certificates
    assert {c["criterion"]: c["status"] for c in report.criteria}["Prop13"] == "HypothesisFails"


def test_document_overrides_are_used():
    doc = spec_document(catalog.sharp_abel())
    doc["analysis"] = {"grid_points": 12, "r_min": 0.5, "r_max": 2.0}
    spec = SystemSpec.model_validate(doc)
    report = AnalysisScheduler().dispatch("sa", spec)
    assert report.options["grid_points"] == 12
    assert [round(c["r0"], 8) for c in report.cycles["cycles"]] == [1.0]
    assert report.cycles["cycles"][0]["plane_stability"] == "Stable"


def test_out_of_scope_system_raises():
    text = '{"weight": [1, 1], "P": [{"coef": "1", "dx": 1, "dy": 0}, {"coef": "1", "dx": 2, "dy": 0}, ' \
           '{"coef": "1", "dx": 3, "dy": 0}], "Q": [{"coef": "1", "dx": 0, "dy": 1}]}'
    with pytest.raises(NotTwoComponents):
        AnalysisScheduler().dispatch("bad", load_spec(text))


def test_report_store_returns_copies():
    store = ReportStore()
    store.update("a", {"x": 1})
    store.update("a", {"y": 2})
    got = store.get("a")
    got["x"] = 5
    assert store.get("a") == {"x": 1, "y": 2}
    assert store.get("missing") == {}


def test_selftest_counts_crashes_as_failures():
    checks = {"boom": {"run": lambda: 1 / 0, "quick": True}, "fine": {"run": lambda: (True, "ok"), "quick": True}}
    assert selftest.run(checks=checks) == [("boom", False, "ZeroDivisionError: division by zero"),
                                           ("fine", True, "ok")]


def test_margin_option_reaches_cycle_scan():
    doc = spec_document(catalog.sharp_abel())
    doc["analysis"] = {"grid_points": 8, "r_min": 0.5, "r_max": 2.0, "margin": 1.0}
    report = AnalysisScheduler().dispatch("sa", SystemSpec.model_validate(doc))
    assert report.options["margin"] == 1.0
    assert report.cycles["cycles"] == []
    assert report.cycles["scan"]["skipped_grid_points"] == 8
