import asyncio
import json
import os
from uuid import uuid4

from fastapi import FastAPI, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse

from coordinator.schema import load_spec
from scheduler.analysis_scheduler import AnalysisScheduler
from system.errors import QHCyclesError, SpecError

app = FastAPI(title="qhcycles")
app.add_middleware(CORSMiddleware, allow_origins=["*"])
sch = AnalysisScheduler()


def _sse(msg) -> str:
    return f"data: {json.dumps(msg, ensure_ascii=False)}\n\n"


# ---------- SSE ----------
@app.post("/analyze_stream")
async def analyze_stream(spec: str = Form(""), file: UploadFile | None = None):
    text = (await file.read()).decode("utf-8") if file else spec
    try:
        doc = load_spec(text)
    except SpecError as e:
        raise HTTPException(status_code=422, detail=e.to_dict())

    ctx = f"ctx_{uuid4().hex}"
    q = asyncio.Queue()
    loop = asyncio.get_running_loop()

    def push(msg): loop.call_soon_threadsafe(q.put_nowait, msg)

    def run():
        try:
            sch.dispatch(ctx, doc, progress_cb=push)
        except QHCyclesError as e:       # out-of-scope system: end the stream with an error event
            push({"type": "error", "data": {"context_id": ctx, "error": f"{type(e).__name__}: {e}"}})

    asyncio.create_task(asyncio.to_thread(run))

    async def event_gen():
        yield _sse({"type": "context", "data": {"context_id": ctx}})
        while True:
            msg = await q.get()
            yield _sse(msg)
            if msg.get("type") in ("report", "error"):
                break

    return StreamingResponse(event_gen(), media_type="text/event-stream")


@app.get("/reports/{context_id}")
async def get_report(context_id: str):
    entry = sch.mem.get(context_id)
    if "report" not in entry:
        raise HTTPException(status_code=404, detail=f"no report for {context_id}")
    return entry["report"]


if __name__ == "__main__":            # python coordinator/server.py
    import uvicorn
    uvicorn.run("coordinator.server:app",
                host=os.getenv("QHCYCLES_HOST", "0.0.0.0"),
                port=int(os.getenv("QHCYCLES_PORT", "8080")))
