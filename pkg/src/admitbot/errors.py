"""Exception hierarchy shared across the engine."""


class AdmitbotError(Exception):
    """Base class for all engine errors."""


# --- ingest ---------------------------------------------------------------

class EmptyDocument(AdmitbotError):
    """Extracted page body is empty or whitespace-only."""


class MalformedInput(AdmitbotError):
    """Input could not be parsed even with lenient error recovery."""


class DuplicateUrl(AdmitbotError):
    """Two input pages share the same canonical URL."""


class StorageFailure(AdmitbotError):
    """Document store could not be written."""


class NetworkError(AdmitbotError):
    """A single page fetch failed (collected, non-fatal during crawls)."""

    def __init__(self, url: str, reason: str):
        super().__init__(f"{url}: {reason}")
        self.url = url
        self.reason = reason


class ZeroPagesFetched(AdmitbotError):
    """A crawl produced no pages at all."""


# --- providers ------------------------------------------------------------

class ProviderError(AdmitbotError):
    """Base class for model-provider errors."""


class ProviderUnreachable(ProviderError):
    """Provider did not respond within the configured retries/timeout."""


class ProviderRefusal(ProviderError):
    """Provider returned empty content or no matching scripted response."""


class DimensionMismatch(ProviderError):
    """Embedding provider returned vectors of inconsistent dimensions."""


# --- retrieval ------------------------------------------------------------

class EmptyCorpus(AdmitbotError):
    """Index build was attempted over an empty manifest."""


class UnresolvedFaqDocId(AdmitbotError):
    """FAQ entries reference document ids missing from the corpus."""

    def __init__(self, offending: dict):
        # offending: faq_id -> list of unknown doc ids
        detail = "; ".join(f"{fid}: {ids}" for fid, ids in sorted(offending.items()))
        super().__init__(f"FAQ entries reference unknown documents: {detail}")
        self.offending = offending


# --- evaluation -----------------------------------------------------------

class SchemaViolation(AdmitbotError):
    """Dataset line failed validation."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class InconsistentAnswerable(AdmitbotError):
    """Answerable flag contradicts the presence/absence of gold sources."""

    def __init__(self, line_no: int, case_id: str):
        super().__init__(
            f"line {line_no}: case {case_id!r} answerable flag contradicts sources"
        )
        self.line_no = line_no
        self.case_id = case_id


class UnparseableVerdict(AdmitbotError):
    """LLM judge output could not be parsed after a retry."""
