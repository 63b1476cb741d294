# smoke run of the analysis pipeline on the second worked system
from scheduler.analysis_scheduler import AnalysisScheduler
from system import catalog

s = AnalysisScheduler()
report = s.dispatch(
    "demo",
    catalog.example2(),
    progress_cb=lambda msg: msg["type"] != "report" and print(msg["type"], msg["data"].get("stage", "")),
)
print(report.to_json())
