"""Relational persistence for conversations, turns and ratings (SQLite).

Tables: conversations(id, user_token, started_at, consent_at, rating) and
turns(id, conversation_id, seq, role, text, sources_json, attempted,
rating, created_at). Per-conversation writes are serialized behind one
lock; message ratings are last-writer-wins, the conversation-level Likert
score is settable exactly once.
"""

from __future__ import annotations

import json
import sqlite3
import threading
import uuid
from datetime import datetime, timezone

from ..errors import AdmitbotError


class ServiceError(AdmitbotError):
    code = "ServiceError"
    http_status = 400


class ConsentRequired(ServiceError):
    code = "ConsentRequired"
    http_status = 403


class PayloadTooLarge(ServiceError):
    code = "PayloadTooLarge"
    http_status = 413


class UnknownConversation(ServiceError):
    code = "UnknownConversation"
    http_status = 404


class UnknownTurn(ServiceError):
    code = "UnknownTurn"
    http_status = 404


class NotAssistantTurn(ServiceError):
    code = "NotAssistantTurn"
    http_status = 422


class TooEarly(ServiceError):
    code = "TooEarly"
    http_status = 409


class AlreadyRated(ServiceError):
    code = "AlreadyRated"
    http_status = 409


class OutOfRange(ServiceError):
    code = "OutOfRange"
    http_status = 422


class Unauthorized(ServiceError):
    code = "Unauthorized"
    http_status = 401


class InvalidPeriod(ServiceError):
    code = "InvalidPeriod"
    http_status = 422


def _now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


_SCHEMA = """
CREATE TABLE IF NOT EXISTS conversations (
    id TEXT PRIMARY KEY,
    user_token TEXT NOT NULL,
    started_at TEXT NOT NULL,
    consent_at TEXT,
    rating INTEGER
);
CREATE TABLE IF NOT EXISTS turns (
    id TEXT PRIMARY KEY,
    conversation_id TEXT NOT NULL REFERENCES conversations(id),
    seq INTEGER NOT NULL,
    role TEXT NOT NULL CHECK (role IN ('user', 'assistant')),
    text TEXT NOT NULL,
    sources_json TEXT NOT NULL DEFAULT '[]',
    attempted INTEGER,
    rating TEXT CHECK (rating IN ('up', 'down')),
    created_at TEXT NOT NULL,
    UNIQUE (conversation_id, seq)
);
CREATE INDEX IF NOT EXISTS idx_turns_conv ON turns(conversation_id, seq);
"""


class ChatStore:
    def __init__(self, path: str = ":memory:"):
        self._conn = sqlite3.connect(path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._lock = threading.Lock()
        with self._lock, self._conn:
            self._conn.executescript(_SCHEMA)

    def close(self):
        self._conn.close()

    # -- conversations -----------------------------------------------------

    def create_conversation(self, user_token: str, consent: bool,
                            started_at: str | None = None) -> str:
        if not consent:
            raise ConsentRequired("consent must be acknowledged first")
        conv_id = uuid.uuid4().hex
        now = started_at or _now()
        with self._lock, self._conn:
            self._conn.execute(
                "INSERT INTO conversations (id, user_token, started_at, consent_at)"
                " VALUES (?, ?, ?, ?)", (conv_id, user_token, now, now))
        return conv_id

    def _conversation_row(self, conv_id: str) -> sqlite3.Row:
        row = self._conn.execute(
            "SELECT * FROM conversations WHERE id = ?", (conv_id,)).fetchone()
        if row is None:
            raise UnknownConversation(f"conversation {conv_id!r} not found")
        return row

    def require_consent(self, conv_id: str):
        if self._conversation_row(conv_id)["consent_at"] is None:
            raise ConsentRequired("consent not recorded for this conversation")

    # -- turns -------------------------------------------------------------

    def append_turn(self, conv_id: str, role: str, text: str,
                    sources: list | None = None, attempted: bool | None = None,
                    created_at: str | None = None) -> str:
        """Low-level insert (also used to seed fixtures)."""
        with self._lock, self._conn:
            self._conversation_row(conv_id)
            seq = self._conn.execute(
                "SELECT COALESCE(MAX(seq), 0) + 1 FROM turns WHERE conversation_id = ?",
                (conv_id,)).fetchone()[0]
            turn_id = uuid.uuid4().hex
            self._conn.execute(
                "INSERT INTO turns (id, conversation_id, seq, role, text,"
                " sources_json, attempted, created_at) VALUES (?, ?, ?, ?, ?, ?, ?, ?)",
                (turn_id, conv_id, seq, role, text,
                 json.dumps(sources or []),
                 None if attempted is None else int(attempted),
                 created_at or _now()))
        return turn_id

    def append_exchange(self, conv_id: str, user_text: str, answer_text: str,
                        sources: list, attempted: bool) -> tuple[str, str]:
        """Persist a user turn and the assistant turn atomically."""
        if not attempted and sources:
            raise ValueError("abstaining turns must not carry sources")
        with self._lock, self._conn:
            self._conversation_row(conv_id)
            seq = self._conn.execute(
                "SELECT COALESCE(MAX(seq), 0) FROM turns WHERE conversation_id = ?",
                (conv_id,)).fetchone()[0]
            user_id, asst_id = uuid.uuid4().hex, uuid.uuid4().hex
            now = _now()
            self._conn.execute(
                "INSERT INTO turns (id, conversation_id, seq, role, text,"
                " created_at) VALUES (?, ?, ?, 'user', ?, ?)",
                (user_id, conv_id, seq + 1, user_text, now))
            self._conn.execute(
                "INSERT INTO turns (id, conversation_id, seq, role, text,"
                " sources_json, attempted, created_at)"
                " VALUES (?, ?, ?, 'assistant', ?, ?, ?, ?)",
                (asst_id, conv_id, seq + 2, answer_text, json.dumps(sources),
                 int(attempted), now))
        return user_id, asst_id

    def turns(self, conv_id: str) -> list[dict]:
        self._conversation_row(conv_id)
        rows = self._conn.execute(
            "SELECT * FROM turns WHERE conversation_id = ? ORDER BY seq",
            (conv_id,)).fetchall()
        return [self._turn_dict(r) for r in rows]

    @staticmethod
    def _turn_dict(row: sqlite3.Row) -> dict:
        attempted = row["attempted"]
        return {
            "id": row["id"],
            "role": row["role"],
            "text": row["text"],
            "sources": json.loads(row["sources_json"]),
            "attempted": None if attempted is None else bool(attempted),
            "rating": row["rating"],
            "created_at": row["created_at"],
        }

    # -- ratings -----------------------------------------------------------

    def rate_message(self, conv_id: str, turn_id: str, rating: str):
        if rating not in ("up", "down"):
            raise OutOfRange(f"rating must be 'up' or 'down', got {rating!r}")
        with self._lock, self._conn:
            self._conversation_row(conv_id)
            row = self._conn.execute(
                "SELECT role FROM turns WHERE id = ? AND conversation_id = ?",
                (turn_id, conv_id)).fetchone()
            if row is None:
                raise UnknownTurn(f"turn {turn_id!r} not found")
            if row["role"] != "assistant":
                raise NotAssistantTurn("only assistant turns can be rated")
            # re-rating overwrites: users change their mind
            self._conn.execute("UPDATE turns SET rating = ? WHERE id = ?",
                               (rating, turn_id))

    def rate_conversation(self, conv_id: str, score: int):
        if not isinstance(score, int) or not 1 <= score <= 5:
            raise OutOfRange(f"score must be an integer in 1..5, got {score!r}")
        with self._lock, self._conn:
            row = self._conversation_row(conv_id)
            if row["rating"] is not None:
                raise AlreadyRated("conversation already rated")
            n_assistant = self._conn.execute(
                "SELECT COUNT(*) FROM turns WHERE conversation_id = ?"
                " AND role = 'assistant'", (conv_id,)).fetchone()[0]
            if n_assistant < 3:
                raise TooEarly(
                    f"conversation rating requires 3 assistant turns, has {n_assistant}")
            self._conn.execute("UPDATE conversations SET rating = ? WHERE id = ?",
                               (score, conv_id))

    # -- admin -------------------------------------------------------------

    def stats(self, period_from: str, period_to: str) -> dict:
        if period_from > period_to:
            raise InvalidPeriod(f"{period_from} > {period_to}")
        args = (period_from, period_to)
        conv = self._conn.execute(
            "SELECT COUNT(*) AS n, COUNT(DISTINCT user_token) AS users,"
            " AVG(rating) AS avg_rating FROM conversations"
            " WHERE started_at >= ? AND started_at <= ?", args).fetchone()
        turn = self._conn.execute(
            "SELECT COUNT(*) AS n,"
            " SUM(CASE WHEN t.rating = 'up' THEN 1 ELSE 0 END) AS up,"
            " SUM(CASE WHEN t.rating = 'down' THEN 1 ELSE 0 END) AS down"
            " FROM turns t JOIN conversations c ON t.conversation_id = c.id"
            " WHERE c.started_at >= ? AND c.started_at <= ?", args).fetchone()
        return {
            "period": {"from": period_from, "to": period_to},
            "users": conv["users"],
            "conversations": conv["n"],
            "messages": turn["n"] or 0,
            "thumbs_up": turn["up"] or 0,
            "thumbs_down": turn["down"] or 0,
            "avg_conversation_rating": conv["avg_rating"],
        }

    def list_conversations(self, period_from: str | None = None,
                           period_to: str | None = None, page: int = 1,
                           page_size: int = 20) -> dict:
        if page < 1 or page_size < 1:
            raise OutOfRange("page and page_size must be >= 1")
        where, args = "", []
        if period_from and period_to:
            if period_from > period_to:
                raise InvalidPeriod(f"{period_from} > {period_to}")
            where = " WHERE started_at >= ? AND started_at <= ?"
            args = [period_from, period_to]
        total = self._conn.execute(
            f"SELECT COUNT(*) FROM conversations{where}", args).fetchone()[0]
        rows = self._conn.execute(
            f"SELECT * FROM conversations{where} ORDER BY started_at DESC, id"
            " LIMIT ? OFFSET ?", [*args, page_size, (page - 1) * page_size]
        ).fetchall()
        items = []
        for row in rows:
            counts = self._conn.execute(
                "SELECT COUNT(*) AS n,"
                " SUM(CASE WHEN rating = 'up' THEN 1 ELSE 0 END) AS up,"
                " SUM(CASE WHEN rating = 'down' THEN 1 ELSE 0 END) AS down"
                " FROM turns WHERE conversation_id = ?", (row["id"],)).fetchone()
            items.append({
                "id": row["id"],
                "started_at": row["started_at"],
                "turn_count": counts["n"],
                "thumbs_up": counts["up"] or 0,
                "thumbs_down": counts["down"] or 0,
                "conversation_rating": row["rating"],
            })
        return {"items": items, "page": page, "page_size": page_size,
                "total": total}

    def get_conversation(self, conv_id: str) -> dict:
        row = self._conversation_row(conv_id)
        return {
            "id": row["id"],
            "started_at": row["started_at"],
            "consent_at": row["consent_at"],
            "conversation_rating": row["rating"],
            "turns": self.turns(conv_id),
        }
