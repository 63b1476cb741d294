import json

import pytest
from fastapi.testclient import TestClient

from coordinator.schema import spec_document
from coordinator.server import app
from system import catalog


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def _events(body: str):
    return [json.loads(line[len("data: "):]) for line in body.splitlines() if line.startswith("data: ")]


def _doc(system, **analysis):
    doc = spec_document(system)
    doc["analysis"] = {"r_min": 0.5, "r_max": 2.0, "grid_points": 8, **analysis}
    return json.dumps(doc)


def test_stream_ends_with_report_and_report_is_stored(client):
    res = client.post("/analyze_stream", data={"spec": _doc(catalog.sharp_abel())})
    assert res.status_code == 200
    assert res.headers["content-type"].startswith("text/event-stream")
    events = _events(res.text)
    assert events[0]["type"] == "context"
    ctx = events[0]["data"]["context_id"]
    assert events[-1]["type"] == "report"
    assert events[-1]["data"]["context_id"] == ctx
    assert any(e["type"] == "criterion" for e in events)

    got = client.get(f"/reports/{ctx}")
    assert got.status_code == 200
    assert got.json()["cycles"]["cycles"][0]["stability"] == "Stable"


def test_stream_accepts_uploaded_file(client):
    files = {"file": ("ex2.json", _doc(catalog.example2()).encode("utf-8"), "application/json")}
    events = _events(client.post("/analyze_stream", files=files).text)
    assert events[-1]["type"] == "report"


def test_bad_document_is_422(client):
    res = client.post("/analyze_stream", data={"spec": '{"weight": [1, 1], "P": []}'})
    assert res.status_code == 422
    assert res.json()["detail"]["field"] == "Q"


def test_out_of_scope_system_ends_with_error_event(client):
    doc = {"weight": [1, 1],
           "P": [{"coef": "1", "dx": 1, "dy": 0}, {"coef": "1", "dx": 2, "dy": 0}, {"coef": "1", "dx": 3, "dy": 0}],
           "Q": [{"coef": "1", "dx": 0, "dy": 1}]}
    events = _events(client.post("/analyze_stream", data={"spec": json.dumps(doc)}).text)
    assert events[-1]["type"] == "error"
    assert "NotTwoComponents" in events[-1]["data"]["error"]


def test_unknown_report_is_404(client):
    assert client.get("/reports/ctx_missing").status_code == 404
