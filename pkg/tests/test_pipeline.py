import pytest
from hypothesis import given
from hypothesis import strategies as hst

from admitbot.errors import ProviderUnreachable
from admitbot.pipeline import (
    DIRECT,
    RETRIEVAL,
    AnswerResult,
    ChatTurn,
    PipelineConfig,
    answer,
    classify_query,
    detect_abstention,
)
from admitbot.pipeline.abstain import DEFAULT_HEDGING_PHRASES
from admitbot.pipeline.answer import OUTAGE_MESSAGE
from admitbot.providers.offline import RecordingChat, ScriptedStubChat
from admitbot.retrieval.types import RetrievalConfig

# Rule matching the routing prompt; must precede content rules in every
# scripted generator because the routing prompt quotes the user query.
ROUTE_RETRIEVAL = (r"Label:", "RETRIEVAL")
ROUTE_DIRECT = (r"Label:", "DIRECT")

ABSTAIN_TEXT = "Unfortunately, I cannot answer based on the available documents."


class TestDetectAbstention:
    @pytest.mark.parametrize("text", [
        ABSTAIN_TEXT,
        "unfortunately, I do not have any information on that topic.",
        "I don't know.",
        "The documents do not provide a tuition figure.",
        "",
        "   ",
    ])
    def test_abstentions(self, text):
        assert detect_abstention(text) is True

    @pytest.mark.parametrize("text", [
        "The deadline is February 23.",
        "You need a B2 language certificate.",
        "Yes - see the guide to fees.",
    ])
    def test_attempts(self, text):
        assert detect_abstention(text) is False

    def test_case_insensitive(self):
        assert detect_abstention("UNFORTUNATELY, I CANNOT ANSWER BASED ON x")

    def test_custom_phrase_family(self):
        assert detect_abstention("No clue, sorry", phrases=("no clue",))
        assert not detect_abstention("I don't know", phrases=("no clue",))

    @given(hst.text(max_size=200))
    def test_total_function(self, text):
        assert detect_abstention(text) in (True, False)


class TestClassifyQuery:
    def test_admission_question_routes_to_retrieval(self):
        gen = ScriptedStubChat([ROUTE_RETRIEVAL])
        assert classify_query([], "Which language certificates are accepted?",
                              gen) == RETRIEVAL

    def test_greeting_routes_direct(self):
        gen = ScriptedStubChat([ROUTE_DIRECT])
        assert classify_query([], "Hi there!", gen) == DIRECT

    def test_unparseable_label_defaults_to_retrieval(self):
        gen = ScriptedStubChat([(r"Label:", "MAYBE")])
        assert classify_query([], "hello", gen) == RETRIEVAL

    def test_provider_outage_defaults_to_retrieval(self):
        class Down:
            def chat_complete(self, req):
                raise ProviderUnreachable("down")

        assert classify_query([], "hello", Down()) == RETRIEVAL

    def test_history_included_in_prompt(self):
        gen = RecordingChat([ROUTE_RETRIEVAL])
        history = [ChatTurn("user", "u1"), ChatTurn("assistant", "a1"),
                   ChatTurn("user", "u2"), ChatTurn("assistant", "a2")]
        classify_query(history, "next", gen)
        prompt = gen.requests[0].last_user_content()
        # only the trailing exchange is shown
        assert "a2" in prompt and "u2" in prompt
        assert "u1" not in prompt

    def test_label_with_trailing_text_accepted(self):
        gen = ScriptedStubChat([(r"Label:", "retrieval - needs documents")])
        assert classify_query([], "fees?", gen) == RETRIEVAL


class TestAnswer:
    def _config(self):
        return PipelineConfig(
            retrieval=RetrievalConfig(strategies=("bm25", "faq")))

    def test_grounded_answer_carries_sources(self, campus_index):
        gen = ScriptedStubChat([
            ROUTE_RETRIEVAL,
            (r"Question:", "The deadline is February 23."),
        ])
        result = answer([], "What about the deadline for the data science "
                        "masters degree?", campus_index, self._config(), gen)
        assert result.attempted is True
        assert result.route == RETRIEVAL
        assert result.text == "The deadline is February 23."
        assert result.sources
        assert result.sources[0][0] == "gold-00"
        doc = campus_index.document("gold-00")
        assert result.sources[0][1:] == (doc.title, doc.source_url)
        assert len(result.sources) <= 5

    def test_abstention_hides_sources(self, campus_index):
        gen = ScriptedStubChat([ROUTE_RETRIEVAL, (r"Question:", ABSTAIN_TEXT)])
        result = answer([], "What is the rector's shoe size?", campus_index,
                        self._config(), gen)
        assert result.attempted is False
        assert result.sources == []
        assert result.text == ABSTAIN_TEXT

    def test_direct_route_skips_retrieval(self, campus_index):
        gen = ScriptedStubChat([ROUTE_DIRECT, (r"Message:", "Hello! Ask away.")])
        result = answer([], "Hi!", campus_index, self._config(), gen)
        assert result.route == DIRECT
        assert result.attempted is True
        assert result.sources == []

    def test_generator_outage_yields_unattempted_notice(self, campus_index):
        class RouteOnly:
            def chat_complete(self, req):
                prompt = req.last_user_content()
                if "Label:" in prompt:
                    return ["RETRIEVAL"]
                raise ProviderUnreachable("down")

        result = answer([], "fees?", campus_index, self._config(), RouteOnly())
        assert result.attempted is False
        assert result.text == OUTAGE_MESSAGE
        assert result.sources == []

    def test_history_passed_to_generator_not_retriever(self, campus_index):
        gen = RecordingChat([ROUTE_RETRIEVAL, (r"Question:", "Answer text.")])
        history = [ChatTurn("user", "earlier question about housing"),
                   ChatTurn("assistant", "earlier answer")]
        result = answer(history, "What about the visa for the data science "
                        "masters degree?", campus_index, self._config(), gen)
        final_prompt = gen.requests[-1].last_user_content()
        assert "earlier question about housing" in final_prompt
        # retrieval used the raw query: visa guide retrieved, not housing
        assert result.sources[0][0] == "gold-04"

    def test_latency_recorded(self, campus_index):
        gen = ScriptedStubChat([ROUTE_RETRIEVAL, (r"Question:", "x")])
        result = answer([], "what about the fees for the data science master",
                        campus_index, self._config(), gen)
        assert result.latency > 0

    def test_empty_generation_counts_as_abstention(self, campus_index):
        gen = ScriptedStubChat([ROUTE_RETRIEVAL, (r"Question:", "   ")])
        result = answer([], "what about the exams for the data science master",
                        campus_index, self._config(), gen)
        assert result.attempted is False and result.sources == []


class TestAnswerResultInvariants:
    def test_abstention_with_sources_rejected(self):
        with pytest.raises(ValueError):
            AnswerResult("x", attempted=False,
                         sources=[("d", "t", "u")], route=RETRIEVAL)

    def test_direct_with_sources_rejected(self):
        with pytest.raises(ValueError):
            AnswerResult("x", attempted=True,
                         sources=[("d", "t", "u")], route=DIRECT)
