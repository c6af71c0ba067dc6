"""HTTP facade over the classifier, embeddings, layout, and sessions.

JSON in, JSON out. Artifacts are loaded once at startup and never
mutated; sessions live in memory, one lock per session so concurrent
clients working on different sessions never serialize against each
other. Error mapping: malformed bodies 400, unknown ingredients 422
only when a recipe has nothing classifiable, unknown session 404,
illegal swaps (including unknown replacement tokens) 409.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict, Field

from . import transform
from .classifier import MLPModel, load_model
from .corpus import active_indices, normalize_ingredient, normalize_ingredients
from .embeddings import EmbeddingSpace, load_embeddings
from .errors import (
    DataError,
    IllegalSwapError,
    UnclassifiableRecipeError,
    UnknownTokenError,
)
from .layout import CircleLayout, barycentric_position, country_similarity, spectral_circle_layout
from .transform import TransformSession


@dataclass
class ServiceState:
    """Immutable artifacts plus the mutable session store."""

    model: MLPModel
    space: EmbeddingSpace
    layout: CircleLayout
    sessions: Dict[str, TransformSession] = field(default_factory=dict)
    locks: Dict[str, threading.Lock] = field(default_factory=dict)
    store_lock: threading.Lock = field(default_factory=threading.Lock)

    def __post_init__(self):
        if self.model.vocab.content_hash() != self.space.vocab.content_hash():
            raise DataError("classifier and embeddings were built on different vocabularies")


def load_service_state(model_path, embedding_path) -> ServiceState:
    model = load_model(model_path)
    space = load_embeddings(embedding_path)
    layout = spectral_circle_layout(country_similarity(space))
    return ServiceState(model=model, space=space, layout=layout)


class ClassifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    ingredients: List[str] = Field(min_length=1)


class SessionCreateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    ingredients: List[str] = Field(min_length=1)
    target: str


class SuggestRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    ingredient: str


class ApplyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    replaced: str
    replacement: str


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def _session_view(state: ServiceState, session: TransformSession) -> dict:
    history = []
    for replaced, replacement, dist in session.history:
        point = barycentric_position(dist.as_mapping(), state.layout)
        history.append(
            {
                "replaced": replaced,
                "replacement": replacement,
                "distribution": dist.as_mapping(),
                "diagram_point": {"x": point.x, "y": point.y},
            }
        )
    dist = session.current_distribution
    point = barycentric_position(dist.as_mapping(), state.layout)
    return {
        "session_id": session.session_id,
        "target": session.target_country,
        "source": session.source_country,
        "ingredients": list(session.current_ingredients),
        "dropped_oov": list(session.dropped),
        "distribution": dist.as_mapping(),
        "diagram_point": {"x": point.x, "y": point.y},
        "history": history,
    }


def create_app(state: ServiceState, static_dir=None) -> FastAPI:
    app = FastAPI(title="cuisineshift", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        # the app reserves 422 for semantically unclassifiable recipes
        return _error(400, f"malformed request: {exc.errors()[:2]}")

    def _session_or_none(session_id: str):
        with state.store_lock:
            session = state.sessions.get(session_id)
            lock = state.locks.get(session_id)
        return session, lock

    @app.post("/classify")
    def classify(body: ClassifyRequest):
        names = normalize_ingredients(body.ingredients)
        if not names:
            return _error(400, "no usable ingredient names")
        indices, _ = active_indices(names, state.model.vocab)
        if not indices:
            return _error(422, "every ingredient is out-of-vocabulary")
        kept = [g for g in names if g in state.model.vocab.ingredient_index]
        dropped = [g for g in names if g not in state.model.vocab.ingredient_index]
        dist = transform.classify_ingredients(kept, state.model)
        point = barycentric_position(dist.as_mapping(), state.layout)
        return {
            "distribution": dist.as_mapping(),
            "dropped_oov": dropped,
            "diagram_point": {"x": point.x, "y": point.y},
        }

    @app.get("/layout")
    def layout_route():
        return {
            "mode": state.layout.mode,
            "countries": state.layout.as_mapping(),
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreateRequest):
        try:
            session = transform.new_session(body.ingredients, body.target, state.model)
        except UnclassifiableRecipeError as exc:
            return _error(422, str(exc))
        except (UnknownTokenError, DataError) as exc:
            return _error(400, str(exc))
        with state.store_lock:
            state.sessions[session.session_id] = session
            state.locks[session.session_id] = threading.Lock()
        return {"session_id": session.session_id, "state": _session_view(state, session)}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session, lock = _session_or_none(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        with lock:
            return _session_view(state, session)

    @app.post("/sessions/{session_id}/suggest")
    def suggest(session_id: str, body: SuggestRequest):
        session, lock = _session_or_none(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        with lock:
            try:
                suggestions = transform.suggest_by_analogy(
                    session, body.ingredient, state.model, state.space, k=10
                )
            except (IllegalSwapError, UnknownTokenError) as exc:
                return _error(409, str(exc))
            return {
                "session_id": session_id,
                "ingredient": normalize_ingredient(body.ingredient),
                "suggestions": [
                    {
                        "original": s.original,
                        "candidate": s.candidate,
                        "analogy_similarity": s.analogy_similarity,
                        "prob_target_after": s.prob_target_after,
                        "prob_source_after": s.prob_source_after,
                    }
                    for s in suggestions
                ],
            }

    @app.post("/sessions/{session_id}/apply")
    def apply(session_id: str, body: ApplyRequest):
        session, lock = _session_or_none(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        with lock:
            try:
                transform.apply_substitution(session, body.replaced, body.replacement,
                                             state.model)
            except (IllegalSwapError, UnknownTokenError) as exc:
                return _error(409, str(exc))
            return _session_view(state, session)

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with state.store_lock:
            existed = state.sessions.pop(session_id, None)
            state.locks.pop(session_id, None)
        if existed is None:
            return _error(404, f"unknown session: {session_id}")
        return None

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app
