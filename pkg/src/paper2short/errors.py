"""Exception hierarchy shared across the pipeline."""


class Paper2ShortError(Exception):
    """Base class for all pipeline errors."""

    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


# --- PDF ingest ---

class NotAPdf(Paper2ShortError):
    code = "not_a_pdf"


class EncryptedPdf(Paper2ShortError):
    code = "encrypted_pdf"


class EmptyDocument(Paper2ShortError):
    code = "empty_document"


class RenderFailure(Paper2ShortError):
    code = "render_failure"


# --- providers ---

class ProviderUnavailable(Paper2ShortError):
    code = "provider_unavailable"


class ProviderTimeout(ProviderUnavailable):
    code = "timeout"


class RateLimited(ProviderUnavailable):
    code = "rate_limited"


class SchemaViolation(Paper2ShortError):
    code = "schema_violation"

    def __init__(self, message: str, raw_response: str | None = None):
        super().__init__(message)
        self.raw_response = raw_response


class EmptyText(Paper2ShortError):
    code = "empty_text"


class DurationOutOfRange(Paper2ShortError):
    code = "duration_out_of_range"


# --- content validation ---

class ValidationExhausted(Paper2ShortError):
    code = "validation_exhausted"


# --- media ---

class MuxFailure(Paper2ShortError):
    code = "mux_failure"


class EncodeFailure(Paper2ShortError):
    code = "encode_failure"


class MissingScene(Paper2ShortError):
    code = "missing_scene"

    def __init__(self, indices):
        self.indices = sorted(indices)
        super().__init__("segments not ready: %s" % self.indices)


# --- project service ---

class UnknownProject(Paper2ShortError):
    code = "unknown_project"


class UnknownHook(Paper2ShortError):
    code = "unknown_hook"


class UnknownSegment(Paper2ShortError):
    code = "unknown_segment"


class UnknownJob(Paper2ShortError):
    code = "unknown_job"


class InvalidState(Paper2ShortError):
    code = "invalid_state"


class AlreadyRunning(Paper2ShortError):
    code = "already_running"


class IllegalTransition(InvalidState):
    code = "illegal_transition"
