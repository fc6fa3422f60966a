"""HTTP front door: registration intake, status, audit paths, transcript.

All state lives in the Sortition machine and its flat files; handlers never
mutate anything after finalize.  Errors come back as {"error": code,
"message": ...} with the code also reflected in the HTTP status.
"""
from __future__ import annotations

import base64
import binascii
import json
import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .signing import ensure_key, public_key_bytes
from .sortition import (
    OversizedEntry,
    Sortition,
    SortitionConfig,
    WindowClosed,
)

ENV_BIND = "VERISORT_BIND"
ENV_DATA_DIR = "VERISORT_DATA_DIR"
ENV_KEY_PATH = "VERISORT_KEY_PATH"

DEFAULT_BIND = "127.0.0.1:8080"


@dataclass(frozen=True)
class ServiceConfig:
    bind: str
    data_dir: Path
    key_path: Path
    sortition: SortitionConfig

    @classmethod
    def load(
        cls,
        config_path: Path,
        bind: str | None = None,
        data_dir: str | None = None,
        key_path: str | None = None,
    ) -> "ServiceConfig":
        """Read the JSON config file; flags win over environment variables,
        which win over the file."""
        obj = json.loads(Path(config_path).read_text())
        resolved_bind = bind or os.environ.get(ENV_BIND) or obj.get("bind") or DEFAULT_BIND
        resolved_data = data_dir or os.environ.get(ENV_DATA_DIR) or obj["data_dir"]
        resolved_key = key_path or os.environ.get(ENV_KEY_PATH) or obj["key_path"]
        return cls(
            bind=resolved_bind,
            data_dir=Path(resolved_data),
            key_path=Path(resolved_key),
            sortition=SortitionConfig.from_json(obj["sortition"]),
        )


def open_sortition(config: ServiceConfig) -> Sortition:
    key = ensure_key(config.key_path)
    return Sortition(config.sortition, config.data_dir, key)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "message": message})


def create_app(state: Sortition) -> FastAPI:
    app = FastAPI(title="verisort", docs_url=None, redoc_url=None)

    @app.post("/api/v1/register")
    async def register(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "malformed", "request body is not valid JSON")
        if not isinstance(body, dict) or not isinstance(body.get("x"), str):
            return _error(400, "malformed", 'expected {"x": "<base64 entry>"}')
        try:
            x_u = base64.b64decode(body["x"], validate=True)
        except (binascii.Error, ValueError):
            return _error(400, "malformed", "x is not valid base64")
        try:
            receipt = state.register(x_u)
        except OversizedEntry as exc:
            return _error(413, "oversized-entry", str(exc))
        except WindowClosed as exc:
            return _error(409, "window-closed", str(exc))
        return JSONResponse(receipt.to_json())

    @app.get("/api/v1/proof/{index}")
    async def proof(index: int):
        transcript = state.transcript()
        if transcript is None:
            return _error(409, "not-finalized", "no transcript has been published yet")
        if not 0 <= index < transcript.n:
            return _error(404, "unknown-index", f"index {index} not in [0, {transcript.n})")
        return JSONResponse(state.audit_path(index).to_json())

    @app.get("/api/v1/transcript")
    async def transcript():
        data = state.transcript_bytes()
        if data is None:
            return _error(409, "not-finalized", "no transcript has been published yet")
        # exact bytes as signed and persisted
        return Response(content=data, media_type="application/json")

    @app.get("/api/v1/status")
    async def status():
        return JSONResponse(
            {
                "phase": state.phase(),
                "n": state.entry_count,
                "opens_at": state.config.window_open,
                "closes_at": state.config.window_close,
            }
        )

    @app.get("/api/v1/key")
    async def key():
        return JSONResponse({"server_pubkey": public_key_bytes(state.signing_key).hex()})

    return app


def serve(config: ServiceConfig) -> None:
    """Run the service until interrupted."""
    import uvicorn

    host, _, port = config.bind.rpartition(":")
    app = create_app(open_sortition(config))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="info")
