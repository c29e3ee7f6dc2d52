"""HTTP gateway: /health, /map, /search, /timeline, /qa over a read-only snapshot."""

from __future__ import annotations

import json
import logging
import time
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import Engine
from .errors import (EmptyContextError, EmptyCorpusError, EngineError,
                     IncompatibleSnapshot, InvalidArgument, NoRouteError,
                     ProviderUnavailable, SnapshotCorrupt)
from .filters import BUCKETS
from .model import Filter, QaRequest

log = logging.getLogger("corpusatlas.gateway")

_ERROR_CODES = [
    (InvalidArgument, "bad_request", 400),
    (EmptyContextError, "empty_result", 404),
    (NoRouteError, "empty_result", 404),
    (EmptyCorpusError, "empty_result", 404),
    (ProviderUnavailable, "provider_unavailable", 502),
    (SnapshotCorrupt, "snapshot_corrupt", 500),
    (IncompatibleSnapshot, "snapshot_corrupt", 500),
]


def _error_response(exc: EngineError) -> JSONResponse:
    for etype, code, status in _ERROR_CODES:
        if isinstance(exc, etype):
            return JSONResponse(status_code=status,
                                content={"code": code, "message": str(exc), "detail": None})
    return JSONResponse(status_code=500,
                        content={"code": "bad_request", "message": str(exc), "detail": None})


def _parse_filter(raw: Optional[str]) -> Filter:
    if not raw:
        return Filter()
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise InvalidArgument(f"filter is not valid JSON: {exc}") from exc
    return Filter.from_dict(data)


def create_app(engine: Optional[Engine] = None, cors_origin: Optional[str] = None) -> FastAPI:
    """Build the API app. `engine` may be attached later via app.state.engine;
    requests before that return 503."""
    app = FastAPI(title="corpusatlas", docs_url=None, redoc_url=None)
    app.state.engine = engine
    origin = cors_origin or (engine.cfg.cors_origin if engine else "*")
    app.add_middleware(
        CORSMiddleware, allow_origins=[origin], allow_methods=["*"], allow_headers=["*"])

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        start = time.perf_counter()
        response = await call_next(request)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        log.info("%s %s %d %.1fms", request.method, request.url.path,
                 response.status_code, elapsed_ms)
        return response

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request, exc: EngineError):
        return _error_response(exc)

    def get_engine() -> Engine:
        if app.state.engine is None:
            raise _NotReady()
        return app.state.engine

    class _NotReady(Exception):
        pass

    @app.exception_handler(_NotReady)
    async def not_ready_handler(_request, _exc):
        return JSONResponse(status_code=503,
                            content={"code": "empty_result",
                                     "message": "snapshot not loaded yet", "detail": None})

    @app.get("/health")
    async def health():
        eng = get_engine()
        return {"status": "ok", "snapshot_id": eng.snapshot_id,
                "doc_count": eng.stats.doc_count}

    @app.get("/map")
    async def map_endpoint(filter: Optional[str] = None):
        eng = get_engine()
        return eng.map_payload(_parse_filter(filter))

    @app.get("/search")
    async def search(q: str = "", mode: str = "lexical", field: str = "body",
                     filter: Optional[str] = None, k: int = 10, offset: int = 0):
        eng = get_engine()
        hits = eng.search(q, mode=mode, field_name=field,
                          flt=_parse_filter(filter), k=k, offset=offset)
        return {"hits": [dict(score=h.score, rank=h.rank, matched_field=h.matched_field,
                              **eng.doc_metadata(h.doc_id)) for h in hits]}

    @app.get("/timeline")
    async def timeline(filter: Optional[str] = None, bucket: str = "day"):
        eng = get_engine()
        if bucket not in BUCKETS:
            raise InvalidArgument(f"unknown bucket granularity {bucket!r}")
        hist = eng.timeline(_parse_filter(filter), bucket)
        return {"buckets": [{"start": d.isoformat(), "count": c} for d, c in hist]}

    @app.post("/qa")
    async def qa(payload: dict):
        eng = get_engine()
        if not isinstance(payload, dict) or "mode" not in payload or "query" not in payload:
            raise InvalidArgument("qa request requires mode and query")
        flt = Filter.from_dict(payload["filter"]) if payload.get("filter") else Filter()
        topic_ids = payload.get("topic_ids")
        request = QaRequest(
            mode=payload["mode"], query=payload["query"], filter=flt,
            topic_ids=frozenset(topic_ids) if topic_ids else None)
        return eng.qa(request).to_dict()

    @app.exception_handler(404)
    async def not_found(_request, _exc):
        return JSONResponse(status_code=404,
                            content={"code": "not_found", "message": "unknown route",
                                     "detail": None})

    return app


def serve(snapshot_dir: str, bind: str = "127.0.0.1:8765", llm=None) -> None:
    """Load a snapshot and serve it. Corrupt snapshots abort startup."""
    import uvicorn

    from .snapshot import load_snapshot

    engine = load_snapshot(snapshot_dir, llm=llm)
    app = create_app(engine)
    host, _, port = bind.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
