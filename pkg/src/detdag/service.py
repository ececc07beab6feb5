"""Stateless JSON analysis service.

Every request carries the full DSL source, so the service keeps no state and
any request order yields identical responses.  Responses are
``{"ok": true, "result": ...}`` or ``{"ok": false, "errors": [...]}``; parse
errors answer 400 with positions, semantic errors (unknown ids, degenerate
queries, bad parameters) answer 422, oversized requests answer 413.

Simulation endpoints return summary statistics (correlation matrix, means,
sds) rather than raw data.

If a built explorer bundle exists (DETDAG_FRONTEND_DIR, default
``frontend/dist``), it is served at the root path.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import wire
from .classify import (
    DegenerateQueryError,
    classify_confounder,
    classify_estimand,
    detect_tautologies,
)
from .dsl import try_parse
from .graph import Dag, UnknownNodeError
from .oracle import SimParams, SimulationError, simulate
from .render import to_dot
from .dsep import is_d_separated, is_D_separated

MAX_REQUEST_BYTES = 256 * 1024
MAX_SIMULATION_N = 100_000


class SourceBody(BaseModel):
    source: str


class DsepBody(SourceBody):
    x: str
    y: str
    given: list[str] = Field(default_factory=list)
    classic: bool = False


class ClassifyBody(SourceBody):
    exposure: str
    outcome: str
    adjust: list[str] = Field(default_factory=list)


class ConfounderBody(SourceBody):
    exposure: str
    outcome: str
    candidate: str


class RenderBody(SourceBody):
    highlight: list[str] = Field(default_factory=list)


class SimulateBody(SourceBody):
    n: int = 10_000
    seed: int = 0


def _ok(result) -> JSONResponse:
    return JSONResponse({"ok": True, "result": result})


def _fail(status: int, errors: list[dict]) -> JSONResponse:
    return JSONResponse({"ok": False, "errors": errors}, status_code=status)


class _ParseFailed(Exception):
    def __init__(self, response: JSONResponse):
        self.response = response


def _dag_or_fail(source: str) -> Dag:
    dag, errors = try_parse(source)
    if dag is None:
        status = 400 if any(e.category != "semantic" for e in errors) else 422
        if not errors:
            status = 400
        raise _ParseFailed(_fail(status, wire.parse_errors_to_json(errors)))
    return dag


def create_app() -> FastAPI:
    app = FastAPI(title="detdag", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        body = await request.body()
        if len(body) > MAX_REQUEST_BYTES:
            return _fail(
                413,
                [{"message": f"request exceeds {MAX_REQUEST_BYTES} bytes"}],
            )
        return await call_next(request)

    @app.exception_handler(_ParseFailed)
    async def parse_failed(_request: Request, exc: _ParseFailed):
        return exc.response

    @app.exception_handler(UnknownNodeError)
    async def unknown_node(_request: Request, exc: UnknownNodeError):
        return _fail(422, [{"message": str(exc)}])

    @app.exception_handler(DegenerateQueryError)
    async def degenerate(_request: Request, exc: DegenerateQueryError):
        return _fail(422, [{"message": str(exc), "code": "degenerate_query"}])

    @app.exception_handler(ValueError)
    async def bad_value(_request: Request, exc: ValueError):
        return _fail(422, [{"message": str(exc)}])

    @app.post("/api/parse")
    async def api_parse(body: SourceBody):
        dag = _dag_or_fail(body.source)
        return _ok({"dag": wire.dag_to_json(dag)})

    @app.post("/api/dsep")
    async def api_dsep(body: DsepBody):
        dag = _dag_or_fail(body.source)
        fn = is_d_separated if body.classic else is_D_separated
        verdict = fn(dag, body.x, body.y, body.given)
        return _ok(wire.verdict_to_json(verdict))

    @app.post("/api/classify")
    async def api_classify(body: ClassifyBody):
        dag = _dag_or_fail(body.source)
        report = classify_estimand(dag, body.exposure, body.outcome, body.adjust)
        return _ok(wire.estimand_to_json(report))

    @app.post("/api/confounder")
    async def api_confounder(body: ConfounderBody):
        dag = _dag_or_fail(body.source)
        role = classify_confounder(dag, body.exposure, body.outcome, body.candidate)
        return _ok(wire.confounder_to_json(role))

    @app.post("/api/tautologies")
    async def api_tautologies(body: SourceBody):
        dag = _dag_or_fail(body.source)
        return _ok({"findings": wire.findings_to_json(detect_tautologies(dag))})

    @app.post("/api/render")
    async def api_render(body: RenderBody):
        dag = _dag_or_fail(body.source)
        return _ok({"dot": to_dot(dag, body.highlight)})

    @app.post("/api/simulate")
    async def api_simulate(body: SimulateBody):
        dag = _dag_or_fail(body.source)
        if body.n < 1 or body.n > MAX_SIMULATION_N:
            return _fail(
                422,
                [{"message": f"n must be between 1 and {MAX_SIMULATION_N}"}],
            )
        try:
            ds = simulate(dag, SimParams(), n=body.n, seed=body.seed)
        except SimulationError as exc:
            return _fail(422, [{"message": str(exc)}])
        return _ok(wire.dataset_summary_to_json(ds))

    frontend = os.environ.get("DETDAG_FRONTEND_DIR", "frontend/dist")
    if os.path.isdir(frontend):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend, html=True), name="explorer")

    return app
