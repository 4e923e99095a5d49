"""HTTP+JSON API for the student chat UI and the admin dashboard.

Endpoints (schemas documented in docs/api.md):
    POST /api/consent
    POST /api/chat
    POST /api/turns/{turn_id}/rating
    POST /api/conversations/{conv_id}/rating
    GET  /api/admin/stats?from&to
    GET  /api/admin/conversations
    GET  /api/admin/conversations/{conv_id}
    GET  /healthz

Errors are returned as {"code", "message"}.
"""

from __future__ import annotations

import logging
import secrets
import uuid

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..pipeline.answer import ChatTurn, PipelineConfig, answer
from . import store as st
from .store import ChatStore

logger = logging.getLogger(__name__)

MAX_MESSAGE_CHARS = 4000


class ConsentIn(BaseModel):
    user_token: str | None = None


class ChatIn(BaseModel):
    message: str
    conversation_id: str | None = None
    consent: bool = False
    user_token: str | None = None


class MessageRatingIn(BaseModel):
    conversation_id: str
    rating: str


class ConversationRatingIn(BaseModel):
    score: int = Field(ge=-1000, le=1000)


def create_app(chat_store: ChatStore, index, generator, reranker=None,
               pipeline_config: PipelineConfig | None = None,
               admin_token: str = "") -> FastAPI:
    app = FastAPI(title="admitbot", docs_url=None, redoc_url=None)
    config = pipeline_config or PipelineConfig()
    admin_token = admin_token or secrets.token_hex(16)

    @app.exception_handler(st.ServiceError)
    async def service_error_handler(request: Request, exc: st.ServiceError):
        return JSONResponse(status_code=exc.http_status,
                            content={"code": exc.code, "message": str(exc)})

    def require_admin(authorization: str | None = Header(default=None)):
        expected = f"Bearer {admin_token}"
        if not authorization or not secrets.compare_digest(authorization, expected):
            raise st.Unauthorized("admin token required")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/api/consent")
    def post_consent(body: ConsentIn):
        token = body.user_token or uuid.uuid4().hex
        conv_id = chat_store.create_conversation(token, consent=True)
        return {"conversation_id": conv_id, "user_token": token}

    @app.post("/api/chat")
    def post_chat(body: ChatIn):
        if len(body.message) > MAX_MESSAGE_CHARS:
            raise st.PayloadTooLarge(
                f"message exceeds {MAX_MESSAGE_CHARS} characters")
        if body.conversation_id is None:
            # first call may bundle the consent acknowledgment
            token = body.user_token or uuid.uuid4().hex
            conv_id = chat_store.create_conversation(token, consent=body.consent)
        else:
            conv_id = body.conversation_id
            chat_store.require_consent(conv_id)

        history = [ChatTurn(t["role"], t["text"]) for t in chat_store.turns(conv_id)]
        result = answer(history, body.message, index, config, generator, reranker)
        sources = [{"doc_id": d, "title": t, "source_url": u}
                   for d, t, u in result.sources]
        _, assistant_turn_id = chat_store.append_exchange(
            conv_id, body.message, result.text, sources, result.attempted)
        return {
            "conversation_id": conv_id,
            "turn_id": assistant_turn_id,
            "text": result.text,
            "attempted": result.attempted,
            "sources": sources,
            "route": result.route,
        }

    @app.post("/api/turns/{turn_id}/rating")
    def post_turn_rating(turn_id: str, body: MessageRatingIn):
        chat_store.rate_message(body.conversation_id, turn_id, body.rating)
        return {"ok": True}

    @app.post("/api/conversations/{conv_id}/rating")
    def post_conversation_rating(conv_id: str, body: ConversationRatingIn):
        chat_store.rate_conversation(conv_id, body.score)
        return {"ok": True}

    @app.get("/api/admin/stats", dependencies=[Depends(require_admin)])
    def admin_stats(period_from: str = Query(alias="from"),
                    period_to: str = Query(alias="to")):
        return chat_store.stats(period_from, period_to)

    @app.get("/api/admin/conversations", dependencies=[Depends(require_admin)])
    def admin_conversations(period_from: str | None = Query(default=None, alias="from"),
                            period_to: str | None = Query(default=None, alias="to"),
                            page: int = 1, page_size: int = 20):
        return chat_store.list_conversations(period_from, period_to, page, page_size)

    @app.get("/api/admin/conversations/{conv_id}",
             dependencies=[Depends(require_admin)])
    def admin_conversation(conv_id: str):
        return chat_store.get_conversation(conv_id)

    return app
