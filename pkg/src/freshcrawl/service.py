"""HTTP control plane for crawls: start, observe, steer, stop.

JSON bodies and responses use lower_snake_case keys; timestamps are RFC
3339 UTC. The event stream is server-sent events, one `data:` line per
batch report, resumable from any batch number via from_batch. The service
binds to loopback by default and carries no authentication; anything
wider is a deployment concern.
"""

from __future__ import annotations

import asyncio
import json
import os
import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .engine import CrawlConfig, CrawlEngine, CrawlStartupError
from .injectors import InjectorError, StreamQuery
from .vectorize import CrawlSpecification

DEFAULT_MAX_ACTIVE = 4


class CapacityError(RuntimeError):
    pass


@dataclass
class CrawlManager:
    """Owns engines and their run directories for one service process."""

    base_dir: str
    max_active: int = DEFAULT_MAX_ACTIVE
    engines: dict[str, CrawlEngine] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock)

    def active_count(self) -> int:
        return sum(1 for e in self.engines.values() if e.running())

    def start(self, spec_json: dict, config_json: dict) -> CrawlEngine:
        with self._lock:
            if self.active_count() >= self.max_active:
                raise CapacityError(
                    f"{self.active_count()} crawls already active (cap {self.max_active})")
            crawl_id = uuid.uuid4().hex[:12]
            out_dir = os.path.join(self.base_dir, f"crawl-{crawl_id}")
            try:
                spec = CrawlSpecification.from_json(spec_json)
                config = CrawlConfig.from_json(config_json or {})
            except (ValueError, InjectorError) as exc:
                raise CrawlStartupError(str(exc))
            engine = CrawlEngine(spec, config, out_dir, crawl_id=crawl_id)
            engine.start()
            self.engines[crawl_id] = engine
            return engine

    def get(self, crawl_id: str) -> CrawlEngine | None:
        return self.engines.get(crawl_id)

    def stop_all(self) -> None:
        for engine in list(self.engines.values()):
            engine.stop()


def _not_found(crawl_id: str) -> JSONResponse:
    return JSONResponse({"error": f"no crawl with id {crawl_id!r}"}, status_code=404)


def create_app(manager: CrawlManager | None = None, base_dir: str = "crawls",
               ui_dir: str | None = None, max_active: int = DEFAULT_MAX_ACTIVE) -> FastAPI:
    if manager is None:
        manager = CrawlManager(base_dir=base_dir, max_active=max_active)
    app = FastAPI(title="freshcrawl control service")
    app.state.manager = manager

    @app.post("/crawls", status_code=201)
    async def create_crawl(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict) or "spec" not in body:
            return JSONResponse({"error": "body must carry a 'spec' object"}, status_code=400)
        try:
            engine = await asyncio.to_thread(
                manager.start, body["spec"], body.get("config") or {})
        except CrawlStartupError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except CapacityError as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        return {"crawl_id": engine.crawl_id, "state": engine.state,
                "mode": engine.config.mode}

    @app.get("/crawls/{crawl_id}/status")
    async def crawl_status(crawl_id: str):
        engine = manager.get(crawl_id)
        if engine is None:
            return _not_found(crawl_id)
        return engine.status()

    @app.get("/crawls/{crawl_id}/metrics")
    async def crawl_metrics(crawl_id: str, from_batch: int = Query(0, ge=0)):
        engine = manager.get(crawl_id)
        if engine is None:
            return _not_found(crawl_id)
        return [r.to_json() for r in engine.reports(from_batch)]

    @app.get("/crawls/{crawl_id}/frontier/top")
    async def frontier_top(crawl_id: str, n: int = Query(10, ge=1, le=1000)):
        engine = manager.get(crawl_id)
        if engine is None:
            return _not_found(crawl_id)
        return [
            {"url": e.url, "score": e.score, "source": e.source}
            for e in engine.frontier.top_queued(n)
        ]

    @app.post("/crawls/{crawl_id}/queries")
    async def update_queries(crawl_id: str, request: Request):
        engine = manager.get(crawl_id)
        if engine is None:
            return _not_found(crawl_id)
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        raw = body.get("queries") if isinstance(body, dict) else None
        if not raw or not isinstance(raw, list):
            return JSONResponse({"error": "body must carry a non-empty 'queries' array"},
                                status_code=400)
        try:
            queries = [StreamQuery.from_json(q) for q in raw]
        except InjectorError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        try:
            engine.update_queries(queries)
        except InjectorError as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        return {"acknowledged": True,
                "active_queries": [q.to_json() for q in queries]}

    @app.post("/crawls/{crawl_id}/stop")
    async def stop_crawl(crawl_id: str):
        engine = manager.get(crawl_id)
        if engine is None:
            return _not_found(crawl_id)
        summary = await asyncio.to_thread(engine.stop)
        return summary

    @app.get("/crawls/{crawl_id}/events")
    async def crawl_events(crawl_id: str, from_batch: int = Query(0, ge=0)):
        engine = manager.get(crawl_id)
        if engine is None:
            return _not_found(crawl_id)

        async def stream():
            cursor = from_batch - 1
            while True:
                reports = await asyncio.to_thread(engine.wait_for_report, cursor, 2.0)
                for report in reports:
                    cursor = max(cursor, report.batch_number)
                    yield f"data: {json.dumps(report.to_json(), sort_keys=True)}\n\n"
                if not reports and not engine.running():
                    yield "event: end\ndata: {}\n\n"
                    return

        return StreamingResponse(stream(), media_type="text/event-stream")

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
