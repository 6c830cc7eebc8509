"""HTTP surface: session CRUD, server-sent event streaming, graph queries.

Event stream format (text/event-stream): one SSE message per session
event, `id:` carrying the sequence number and `data:` the JSON payload.
Clients resume after a drop by passing ?from=<last seen seq + 1>; the
boundary event may repeat, dedup is by sequence number.
"""

from __future__ import annotations

import json
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse, Response, StreamingResponse

from ..errors import (
    ArgumentError,
    ConfigError,
    IdeagraphError,
    LookupError_,
    NoPathError,
    SessionNotFoundError,
    SessionStateError,
)
from ..graph.embeddings import nearest_node
from ..pathing.search import sample as sample_dispatch
from ..pathing.types import PathConfig
from .sessions import SessionManager, SessionRequest


def create_app(manager: SessionManager, gateway_for_queries=None) -> FastAPI:
    """Build the service app around one SessionManager."""
    app = FastAPI(title="ideagraph", version="0.1.0")
    query_gateway = gateway_for_queries or manager.backends.make_gateway()

    @app.exception_handler(IdeagraphError)
    async def _ideagraph_error(request: Request, exc: IdeagraphError):
        status = 500
        if isinstance(exc, SessionNotFoundError):
            status = 404
        elif isinstance(exc, (NoPathError, LookupError_)):
            status = 404
        elif isinstance(exc, SessionStateError):
            status = 409
        elif isinstance(exc, (ConfigError, ArgumentError)):
            status = 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.post("/sessions")
    async def create_session(body: dict):
        request = SessionRequest.from_dict(body or {})
        session_id = manager.create_session(request)
        return {"id": session_id}

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str):
        return manager.get(session_id).snapshot()

    @app.get("/sessions/{session_id}/events")
    async def stream_events(session_id: str, from_seq: int = Query(0, alias="from")):
        session = manager.get(session_id)

        def generate():
            for event in session.events.follow(from_seq, stop=session.is_terminal):
                payload = json.dumps(event, ensure_ascii=False)
                yield f"id: {event['seq']}\ndata: {payload}\n\n"
            yield "event: end\ndata: {}\n\n"

        return StreamingResponse(generate(), media_type="text/event-stream")

    @app.post("/sessions/{session_id}/human-message")
    async def human_message(session_id: str, body: dict):
        return manager.post_human_message(session_id, str(body.get("text", "")))

    @app.get("/sessions/{session_id}/document.md")
    async def document_md(session_id: str):
        return PlainTextResponse(manager.document_markdown(session_id), media_type="text/markdown")

    @app.get("/sessions/{session_id}/document.json")
    async def document_json(session_id: str):
        return manager.document_json(session_id)

    @app.get("/sessions/{session_id}/document.csv")
    async def document_csv(session_id: str):
        return Response(manager.document_csv(session_id), media_type="text/csv")

    @app.get("/graph/stats")
    async def graph_stats():
        return {"nodes": manager.graph.node_count, "edges": manager.graph.edge_count}

    @app.get("/graph/path")
    async def graph_path(
        source: str = Query(..., alias="from"),
        to: str = Query(...),
        alpha: float = 0.2,
        waypoints: int = 0,
        hops: int = 2,
        seed: int = 0,
        mode: str = "random",
    ):
        cfg = PathConfig(alpha=alpha, k_waypoints=waypoints, hops=hops, seed=seed, mode=mode)
        source_id, _ = nearest_node(manager.graph, manager.store, source, query_gateway)
        target_id, _ = nearest_node(manager.graph, manager.store, to, query_gateway)
        sample = sample_dispatch(manager.graph, manager.store, source_id, target_id, cfg)
        return {
            "nodes": sample.nodes,
            "labels": sample.labels,
            "relations": sample.relations,
            "path_string": sample.path_string,
            "meta": sample.meta,
            "subgraph": {
                "nodes": [
                    {"id": n.id, "label": n.label} for n in sample.subgraph.nodes.values()
                ],
                "edges": [
                    {"source": e.source, "target": e.target, "relation": e.relation}
                    for e in sample.subgraph.edges
                ],
            },
        }

    return app
