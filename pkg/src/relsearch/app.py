"""Read-only HTTP API over a loaded index.

Endpoints:
    GET /api/health                       service status and index fingerprint
    GET /api/search?q=&k=&min_similarity=&offset=
    GET /api/entity/{class_id}            class card

Errors are JSON bodies {"error", "detail"}: 400 for bad parameters, 404 for
an unknown class. When a static directory is configured the single-page
client is served under /.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import SearchEngine
from .errors import UnknownClassError
from .schemas import EntityCard, HealthResponse, SearchResponse


def create_app(engine: SearchEngine, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="relsearch", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def bad_parameters(_request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        detail = f"{where}: {first.get('msg', 'invalid value')}" if where else "invalid request"
        return JSONResponse(status_code=400,
                            content={"error": "bad_parameters", "detail": detail})

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(
            status="ok",
            index_fingerprint=engine.fingerprint,
            classes=len(engine.index.classes),
            relation_keys=len(engine.index.postings),
        )

    @app.get("/api/search", response_model=SearchResponse)
    def search(
        q: str = Query(..., min_length=1),
        k: int = Query(5, ge=1, le=100),
        min_similarity: float | None = Query(None, ge=0.0, le=1.0),
        offset: int = Query(0, ge=0),
    ) -> SearchResponse:
        return engine.search(q, k=k, min_similarity=min_similarity, offset=offset)

    @app.get("/api/entity/{class_id}", response_model=EntityCard,
             responses={404: {"description": "unknown class"}})
    def entity(class_id: int):
        try:
            return engine.entity_card(class_id)
        except UnknownClassError:
            return JSONResponse(
                status_code=404,
                content={"error": "unknown_class",
                         "detail": f"no entity class with id {class_id}"})

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    else:
        @app.get("/")
        def root():
            return {"service": "relsearch", "endpoints": ["/api/health", "/api/search",
                                                          "/api/entity/{class_id}"]}

    return app
