"""HTTP facade over sessions for the operator console.

Each session is serialized behind its own lock, so a long reconciliation in
one session never blocks operations on another. Errors map to JSON bodies
{"error", "code"}; out-of-order calls (e.g. propose before recommend) and
past-horizon operations return 409.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .errors import (
    DimensionMismatchError,
    InvalidActionError,
    OutOfOrderError,
    ReconPlanError,
    TerminalStateError,
    UnknownSessionError,
)
from .session import Session, SessionConfig, create_session


def _status_for(exc: Exception) -> int:
    if isinstance(exc, UnknownSessionError):
        return 404
    if isinstance(exc, (OutOfOrderError, TerminalStateError)):
        return 409
    if isinstance(exc, (InvalidActionError, DimensionMismatchError, ValueError)):
        return 400
    return 500


class SessionRegistry:
    """Thread-safe store of sessions with per-session operation locks."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def create(self, config: SessionConfig) -> Session:
        session = create_session(config)
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        return session

    def get(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._registry_lock:
            if session_id not in self._sessions:
                raise UnknownSessionError(f"no session {session_id!r}")
            return self._sessions[session_id], self._locks[session_id]


def _parse_action(body: dict) -> tuple[int, ...]:
    action = body.get("action")
    if not isinstance(action, (list, tuple)):
        raise InvalidActionError("body must contain an action array")
    return tuple(int(a) for a in action)


def create_app(base_config: SessionConfig | None = None) -> FastAPI:
    base = base_config or SessionConfig.default()
    app = FastAPI(title="reconplan session service")
    registry = SessionRegistry()
    app.state.registry = registry

    @app.exception_handler(ReconPlanError)
    async def _handle_domain_error(request: Request, exc: ReconPlanError):
        code = _status_for(exc)
        return JSONResponse(status_code=code, content={"error": str(exc), "code": code})

    @app.exception_handler(ValueError)
    async def _handle_value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": str(exc), "code": 400})

    @app.exception_handler(RequestValidationError)
    async def _handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc), "code": 400})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session_endpoint(body: dict | None = None):
        body = body or {}
        doc = base.to_json_dict()
        overrides = body.get("config", {})
        for key, value in overrides.items():
            if isinstance(value, dict) and isinstance(doc.get(key), dict):
                doc[key] = {**doc[key], **value}
            else:
                doc[key] = value
        if "seed" in body:
            doc["seed"] = int(body["seed"])
        session = registry.create(SessionConfig.from_json_dict(doc))
        return {"id": session.id}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str, debug: bool = False):
        session, lock = registry.get(session_id)
        with lock:
            view = session.export(debug=debug)
            view["id"] = session.id
            view["timestep"] = session.timestep
            view["terminal"] = session.terminal
            view["has_recommendation"] = session.has_recommendation
            return view

    @app.post("/sessions/{session_id}/recommend")
    def recommend(session_id: str):
        session, lock = registry.get(session_id)
        with lock:
            action, estimate = session.recommend()
            actions = session.config.hvac.actions()
            return {
                "action": list(action),
                "q_values": [
                    {"action": list(a), "q": float(q)}
                    for a, q in zip(actions, estimate.q_values)
                ],
            }

    @app.post("/sessions/{session_id}/step")
    def step(session_id: str, body: dict):
        session, lock = registry.get(session_id)
        with lock:
            report = session.step(_parse_action(body))
            return report.to_json_dict()

    @app.post("/sessions/{session_id}/propose")
    def propose(session_id: str, body: dict):
        session, lock = registry.get(session_id)
        with lock:
            result, explanation = session.propose(_parse_action(body))
            return {
                "reconcile_result": result.to_json_dict(include_trace=False),
                "explanation": explanation.to_json_list(),
            }

    @app.get("/sessions/{session_id}/export")
    def export(session_id: str, debug: bool = False):
        session, lock = registry.get(session_id)
        with lock:
            return session.export(debug=debug)

    return app
