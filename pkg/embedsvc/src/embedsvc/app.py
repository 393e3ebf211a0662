"""FastAPI application: POST /embed, GET /models, GET /healthz."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .registry import BatchTooLargeError, Registry, UnknownModelError


class EmbedRequest(BaseModel):
    model_id: str
    texts: list[str] = Field(min_length=1)


class EmbedResponse(BaseModel):
    model_id: str
    dim: int
    vectors: list[list[float]]
    truncated: list[bool]
    pooling: str


def create_app(registry: Registry | None = None) -> FastAPI:
    app = FastAPI(title="embedsvc", version="0.1.0")
    app.state.registry = registry if registry is not None else Registry()

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/models")
    def models():
        return {"models": app.state.registry.describe()}

    @app.post("/embed", response_model=EmbedResponse)
    def embed(request: EmbedRequest):
        reg: Registry = app.state.registry
        try:
            vectors, truncated = reg.embed(request.model_id, request.texts)
        except UnknownModelError:
            raise HTTPException(status_code=404,
                                detail=f"unknown model {request.model_id!r}")
        except BatchTooLargeError as exc:
            raise HTTPException(status_code=413, detail=str(exc))
        return EmbedResponse(
            model_id=request.model_id,
            dim=int(vectors.shape[1]),
            vectors=[[float(v) for v in row] for row in vectors],
            truncated=truncated,
            pooling=reg.entry(request.model_id).pooling,
        )

    return app
