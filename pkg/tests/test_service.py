import pytest
from fastapi.testclient import TestClient

from admitbot.pipeline import PipelineConfig
from admitbot.providers.offline import ScriptedStubChat
from admitbot.retrieval.types import RetrievalConfig
from admitbot.service.app import create_app
from admitbot.service.store import (
    AlreadyRated,
    ChatStore,
    ConsentRequired,
    InvalidPeriod,
    NotAssistantTurn,
    OutOfRange,
    TooEarly,
    UnknownConversation,
    UnknownTurn,
)

ABSTAIN_TEXT = "Unfortunately, I cannot answer based on the available documents."
ADMIN_TOKEN = "test-admin-token"
ADMIN = {"Authorization": f"Bearer {ADMIN_TOKEN}"}


@pytest.fixture()
def store():
    s = ChatStore()
    yield s
    s.close()


@pytest.fixture()
def client(store, campus_index):
    generator = ScriptedStubChat([
        (r"Label:", "RETRIEVAL"),
        (r"Question: .*rector", ABSTAIN_TEXT),
        (r"Question:", "The answer from the documents."),
    ])
    config = PipelineConfig(retrieval=RetrievalConfig(strategies=("bm25", "faq")))
    app = create_app(store, campus_index, generator,
                     pipeline_config=config, admin_token=ADMIN_TOKEN)
    return TestClient(app)


def _start(client):
    return client.post("/api/consent", json={}).json()


class TestStore:
    def test_consent_required_to_create(self, store):
        with pytest.raises(ConsentRequired):
            store.create_conversation("tok", consent=False)

    def test_exchange_round_trip(self, store):
        conv = store.create_conversation("tok", consent=True)
        user_id, asst_id = store.append_exchange(
            conv, "q?", "a.", [{"doc_id": "d", "title": "t", "source_url": "u"}],
            attempted=True)
        turns = store.turns(conv)
        assert [t["role"] for t in turns] == ["user", "assistant"]
        assert turns[1]["id"] == asst_id
        assert turns[1]["sources"][0]["doc_id"] == "d"

    def test_abstaining_exchange_rejects_sources(self, store):
        conv = store.create_conversation("tok", consent=True)
        with pytest.raises(ValueError):
            store.append_exchange(conv, "q", "a", [{"doc_id": "d"}],
                                  attempted=False)

    def test_message_rating_overwrite(self, store):
        conv = store.create_conversation("tok", consent=True)
        _, asst = store.append_exchange(conv, "q", "a", [], attempted=True)
        store.rate_message(conv, asst, "up")
        store.rate_message(conv, asst, "down")
        assert store.turns(conv)[1]["rating"] == "down"

    def test_user_turn_not_ratable(self, store):
        conv = store.create_conversation("tok", consent=True)
        user_id, _ = store.append_exchange(conv, "q", "a", [], attempted=True)
        with pytest.raises(NotAssistantTurn):
            store.rate_message(conv, user_id, "up")

    def test_unknown_turn(self, store):
        conv = store.create_conversation("tok", consent=True)
        with pytest.raises(UnknownTurn):
            store.rate_message(conv, "nope", "up")

    def test_invalid_thumb_value(self, store):
        conv = store.create_conversation("tok", consent=True)
        _, asst = store.append_exchange(conv, "q", "a", [], attempted=True)
        with pytest.raises(OutOfRange):
            store.rate_message(conv, asst, "sideways")

    def test_conversation_rating_gated_on_three_replies(self, store):
        conv = store.create_conversation("tok", consent=True)
        for _ in range(2):
            store.append_exchange(conv, "q", "a", [], attempted=True)
        with pytest.raises(TooEarly):
            store.rate_conversation(conv, 4)
        store.append_exchange(conv, "q", "a", [], attempted=True)
        store.rate_conversation(conv, 4)
        with pytest.raises(AlreadyRated):
            store.rate_conversation(conv, 5)

    def test_conversation_rating_range(self, store):
        conv = store.create_conversation("tok", consent=True)
        for score in (0, 6):
            with pytest.raises(OutOfRange):
                store.rate_conversation(conv, score)

    def test_unknown_conversation(self, store):
        with pytest.raises(UnknownConversation):
            store.turns("missing")

    def test_invalid_period(self, store):
        with pytest.raises(InvalidPeriod):
            store.stats("2026-02-01", "2026-01-01")


class TestStatsSeed:
    """Usage-report fixture: 27 distinct users, 40 conversations and 358
    messages within the report period, plus out-of-period noise."""

    @pytest.fixture()
    def seeded(self, store):
        in_period = "2026-03-10T12:00:00.000000Z"
        # 38 conversations with 9 turns + 2 with 8 turns = 358 turns
        for i in range(40):
            token = f"user-{i % 27:02d}"
            conv = store.create_conversation(token, consent=True,
                                             started_at=in_period)
            n_turns = 9 if i < 38 else 8
            for j in range(n_turns):
                role = "user" if j % 2 == 0 else "assistant"
                store.append_turn(conv, role, f"turn {j}")
        # out-of-period conversation must not leak into the report
        noise = store.create_conversation("user-99", consent=True,
                                          started_at="2026-05-01T00:00:00.000000Z")
        store.append_turn(noise, "user", "later message")
        return store

    def test_period_report(self, seeded):
        stats = seeded.stats("2026-03-01T00:00:00.000000Z",
                             "2026-03-31T23:59:59.999999Z")
        assert stats["users"] == 27
        assert stats["conversations"] == 40
        assert stats["messages"] == 358

    def test_wide_period_includes_noise(self, seeded):
        stats = seeded.stats("2026-01-01T00:00:00.000000Z",
                             "2026-12-31T23:59:59.999999Z")
        assert stats["conversations"] == 41
        assert stats["users"] == 28
        assert stats["messages"] == 359


class TestConsentAndChat:
    def test_consent_creates_conversation(self, client):
        body = _start(client)
        assert body["conversation_id"] and body["user_token"]

    def test_chat_without_consent_rejected(self, client):
        resp = client.post("/api/chat", json={"message": "hi"})
        assert resp.status_code == 403
        assert resp.json()["code"] == "ConsentRequired"

    def test_chat_with_bundled_consent(self, client):
        resp = client.post("/api/chat", json={
            "message": "What about the deadline for the data science "
                       "masters degree?", "consent": True})
        assert resp.status_code == 200
        body = resp.json()
        assert body["attempted"] is True
        assert body["sources"][0]["doc_id"] == "gold-00"
        assert {"doc_id", "title", "source_url"} <= set(body["sources"][0])

    def test_followup_uses_existing_conversation(self, client):
        conv = _start(client)["conversation_id"]
        r1 = client.post("/api/chat", json={
            "message": "What about the fees for the data science masters "
                       "degree?", "conversation_id": conv})
        assert r1.status_code == 200
        assert r1.json()["conversation_id"] == conv

    def test_abstention_hides_sources_in_api(self, client):
        resp = client.post("/api/chat", json={
            "message": "What colour does the rector prefer?", "consent": True})
        body = resp.json()
        assert body["attempted"] is False
        assert body["sources"] == []

    def test_unknown_conversation_404(self, client):
        resp = client.post("/api/chat", json={"message": "x",
                                              "conversation_id": "missing"})
        assert resp.status_code == 404
        assert resp.json()["code"] == "UnknownConversation"

    def test_oversized_message_413(self, client):
        resp = client.post("/api/chat", json={"message": "x" * 4001,
                                              "consent": True})
        assert resp.status_code == 413
        assert resp.json()["code"] == "PayloadTooLarge"

    def test_turns_persisted(self, client, store):
        resp = client.post("/api/chat", json={
            "message": "What about the visa for the data science masters "
                       "degree?", "consent": True})
        conv = resp.json()["conversation_id"]
        turns = store.turns(conv)
        assert [t["role"] for t in turns] == ["user", "assistant"]
        assert turns[1]["attempted"] is True

    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}


class TestRatingEndpoints:
    def _exchange(self, client):
        resp = client.post("/api/chat", json={
            "message": "What about the housing for the data science masters "
                       "degree?", "consent": True})
        body = resp.json()
        return body["conversation_id"], body["turn_id"]

    def test_thumb_rating(self, client):
        conv, turn = self._exchange(client)
        resp = client.post(f"/api/turns/{turn}/rating",
                           json={"conversation_id": conv, "rating": "up"})
        assert resp.status_code == 200

    def test_invalid_thumb_422(self, client):
        conv, turn = self._exchange(client)
        resp = client.post(f"/api/turns/{turn}/rating",
                           json={"conversation_id": conv, "rating": "meh"})
        assert resp.status_code == 422
        assert resp.json()["code"] == "OutOfRange"

    def test_conversation_rating_too_early_409(self, client):
        conv, _ = self._exchange(client)
        resp = client.post(f"/api/conversations/{conv}/rating", json={"score": 5})
        assert resp.status_code == 409
        assert resp.json()["code"] == "TooEarly"

    def test_conversation_rating_happy_path_then_duplicate(self, client, store):
        conv, _ = self._exchange(client)
        for _ in range(2):
            store.append_exchange(conv, "q", "a", [], attempted=True)
        assert client.post(f"/api/conversations/{conv}/rating",
                           json={"score": 4}).status_code == 200
        resp = client.post(f"/api/conversations/{conv}/rating", json={"score": 2})
        assert resp.status_code == 409
        assert resp.json()["code"] == "AlreadyRated"

    def test_score_out_of_range_422(self, client, store):
        conv, _ = self._exchange(client)
        for _ in range(2):
            store.append_exchange(conv, "q", "a", [], attempted=True)
        resp = client.post(f"/api/conversations/{conv}/rating", json={"score": 9})
        assert resp.status_code == 422


class TestAdminEndpoints:
    def test_requires_token(self, client):
        resp = client.get("/api/admin/stats",
                          params={"from": "2026-01-01", "to": "2026-12-31"})
        assert resp.status_code == 401
        assert resp.json()["code"] == "Unauthorized"

    def test_wrong_token(self, client):
        resp = client.get("/api/admin/stats",
                          params={"from": "2026-01-01", "to": "2026-12-31"},
                          headers={"Authorization": "Bearer wrong"})
        assert resp.status_code == 401

    def test_stats_counts(self, client):
        client.post("/api/chat", json={
            "message": "What about the exams for the data science masters "
                       "degree?", "consent": True})
        resp = client.get("/api/admin/stats",
                          params={"from": "2020-01-01", "to": "2030-01-01"},
                          headers=ADMIN)
        body = resp.json()
        assert body["conversations"] == 1 and body["messages"] == 2
        assert body["users"] == 1

    def test_conversation_listing_and_detail(self, client):
        conv, turn = None, None
        for _ in range(3):
            resp = client.post("/api/chat", json={
                "message": "What about the credits for the data science "
                           "masters degree?", "consent": True})
            conv = resp.json()["conversation_id"]
            turn = resp.json()["turn_id"]
        client.post(f"/api/turns/{turn}/rating",
                    json={"conversation_id": conv, "rating": "up"})
        listing = client.get("/api/admin/conversations", headers=ADMIN).json()
        assert listing["total"] == 3
        page = client.get("/api/admin/conversations",
                          params={"page": 1, "page_size": 2},
                          headers=ADMIN).json()
        assert len(page["items"]) == 2 and page["total"] == 3
        detail = client.get(f"/api/admin/conversations/{conv}",
                            headers=ADMIN).json()
        assert detail["id"] == conv
        assert detail["turns"][-1]["rating"] == "up"

    def test_invalid_period_422(self, client):
        resp = client.get("/api/admin/stats",
                          params={"from": "2026-12-31", "to": "2026-01-01"},
                          headers=ADMIN)
        assert resp.status_code == 422
        assert resp.json()["code"] == "InvalidPeriod"
