"""HTTP JSON API wrapping the session service, plus static UI hosting.

Deployment note: the service is meant to run inside the user's own
domain (typically localhost). Profile data lives in sessions only, is
purged with them, and no response before a round's completion carries
viewer information.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import DomainError
from .generator import default_stranger_pool, demo_snapshot_bytes, with_stranger_pool
from .session import SessionService, SessionStore, UnknownSessionError, InvalidSnapshotError
from .snapshot import (
    PersonKind,
    Person,
    ProfileSnapshot,
    SnapshotParseError,
    SnapshotReferenceError,
    SnapshotSchemaError,
    load_snapshot,
    load_snapshot_file,
)

DEFAULT_LISTEN = "127.0.0.1:8000"

_STATUS_BY_CODE = {
    "unknown_session": 404,
    "invalid_snapshot": 422,
    "parse_error": 400,
    "schema_error": 400,
    "reference_error": 400,
}
_DEFAULT_STATUS = 409  # state conflicts: wrong step, stale pair, re-picks, ...


@dataclass(frozen=True)
class ServerConfig:
    listen: str = DEFAULT_LISTEN
    session_ttl_seconds: float = 30 * 60
    session_capacity: int = 1000
    stranger_pool_path: str | None = None
    static_dir: str | None = None
    snapshot_dir: str | None = None
    persist_path: str | None = None

    @property
    def host(self) -> str:
        return self.listen.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen.rsplit(":", 1)[1])


def load_config(path: str | Path | None = None, env: dict | None = None) -> ServerConfig:
    """Config file (JSON) with environment overrides (PRIVCHECK_*)."""
    config = ServerConfig()
    if path is not None:
        doc = json.loads(Path(path).read_text("utf-8"))
        known = {f for f in ServerConfig.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        config = replace(config, **doc)
    env = env if env is not None else os.environ
    overrides = {}
    mapping = {
        "PRIVCHECK_LISTEN": ("listen", str),
        "PRIVCHECK_SESSION_TTL_SECONDS": ("session_ttl_seconds", float),
        "PRIVCHECK_SESSION_CAPACITY": ("session_capacity", int),
        "PRIVCHECK_STRANGER_POOL": ("stranger_pool_path", str),
        "PRIVCHECK_STATIC_DIR": ("static_dir", str),
        "PRIVCHECK_SNAPSHOT_DIR": ("snapshot_dir", str),
        "PRIVCHECK_PERSIST_PATH": ("persist_path", str),
    }
    for var, (field_name, cast) in mapping.items():
        if var in env:
            overrides[field_name] = cast(env[var])
    return replace(config, **overrides)


class CreateSessionRequest(BaseModel):
    snapshot: dict | None = None
    snapshot_path: str | None = None
    seed: int | None = None


class BattleChoiceRequest(BaseModel):
    winner: str


class RoundSelectRequest(BaseModel):
    person: str


def _load_pool(config: ServerConfig) -> tuple[Person, ...]:
    if config.stranger_pool_path is None:
        return default_stranger_pool()
    doc = json.loads(Path(config.stranger_pool_path).read_text("utf-8"))
    return tuple(
        Person(
            id=e["id"],
            display_name=e["display_name"],
            kind=PersonKind.STRANGER,
            avatar_ref=e.get("avatar_ref"),
        )
        for e in doc["strangers"]
    )


def create_app(
    config: ServerConfig | None = None, service: SessionService | None = None
) -> FastAPI:
    config = config or ServerConfig()
    if service is None:
        store = SessionStore(
            ttl_seconds=config.session_ttl_seconds,
            capacity=config.session_capacity,
            persist_path=config.persist_path,
        )
        service = SessionService(store=store)
        store.load_persisted(service.clock.now())
    pool = _load_pool(config)

    app = FastAPI(title="privcheck", docs_url=None, redoc_url=None)

    @app.exception_handler(DomainError)
    async def domain_error_handler(request: Request, exc: DomainError):
        status = _STATUS_BY_CODE.get(exc.code, _DEFAULT_STATUS)
        return JSONResponse(status_code=status, content=exc.to_payload())

    def _resolve_snapshot(body: CreateSessionRequest) -> ProfileSnapshot:
        if (body.snapshot is None) == (body.snapshot_path is None):
            raise SnapshotSchemaError("provide exactly one of snapshot or snapshot_path")
        if body.snapshot is not None:
            snapshot = load_snapshot(json.dumps(body.snapshot))
        elif body.snapshot_path == "demo":
            snapshot = load_snapshot(demo_snapshot_bytes())
        else:
            if config.snapshot_dir is None:
                raise SnapshotSchemaError(
                    "snapshot_path is limited to 'demo' unless the server "
                    "is configured with a snapshot directory"
                )
            base = Path(config.snapshot_dir).resolve()
            target = (base / body.snapshot_path).resolve()
            if base not in target.parents and target != base:
                raise SnapshotSchemaError("snapshot_path escapes the snapshot directory")
            snapshot = load_snapshot_file(target)
        return with_stranger_pool(snapshot, pool)

    @app.post("/api/v1/sessions")
    def create_session(body: CreateSessionRequest):
        snapshot = _resolve_snapshot(body)
        token, step = service.create_session(snapshot, seed=body.seed)
        return {"token": token, "step": step.label()}

    @app.get("/api/v1/sessions/{token}")
    def session_state(token: str):
        return service.state_view(token)

    @app.post("/api/v1/sessions/{token}/advance")
    def advance(token: str):
        return {"step": service.advance(token).label()}

    @app.get("/api/v1/sessions/{token}/battle")
    def battle_pair(token: str):
        return service.battle_pair(token)

    @app.post("/api/v1/sessions/{token}/battle")
    def battle_choice(token: str, body: BattleChoiceRequest):
        return service.battle_choice(token, body.winner)

    @app.get("/api/v1/sessions/{token}/round")
    def round_view(token: str):
        return service.round_view(token)

    @app.post("/api/v1/sessions/{token}/round/select")
    def round_select(token: str, body: RoundSelectRequest):
        return service.round_select(token, body.person)

    @app.get("/api/v1/sessions/{token}/result")
    def result(token: str):
        return service.result(token).to_json_dict()

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def run_server(config: ServerConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="info")
