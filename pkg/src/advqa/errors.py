"""Exception types shared across the toolkit."""


class AdvqaError(Exception):
    """Base class for all toolkit errors."""


class CorpusFormatError(AdvqaError):
    """Interchange file is malformed; carries the offending record id when known."""

    def __init__(self, message, record_id=None):
        super().__init__(message if record_id is None else f"{message} (record: {record_id})")
        self.record_id = record_id


class AnswerSpanError(AdvqaError):
    """An answer span does not extract from its context at the recorded offset."""

    def __init__(self, record_id, start, text, found):
        super().__init__(
            f"answer span mismatch for {record_id!r}: expected {text!r} at offset "
            f"{start}, found {found!r}"
        )
        self.record_id = record_id
        self.start = start
        self.text = text
        self.found = found


class AnnotationFormatError(AdvqaError):
    """CoNLL-U record is malformed (missing qa_id comment, bad column count, ...)."""


class TreeError(AdvqaError):
    """Dependency heads do not form a single rooted tree."""

    def __init__(self, qa_id, reason):
        super().__init__(f"invalid dependency tree for {qa_id!r}: {reason}")
        self.qa_id = qa_id


class EmptyPoolError(AdvqaError):
    """Entity pool construction received no annotated records."""


class SamplingError(AdvqaError):
    """No eligible entity remains for a requested label, even after fallback."""


class GenerationError(AdvqaError):
    """Statement instantiation produced nothing usable for this instance."""


class PredictionLookupError(AdvqaError):
    """A required prediction is missing for an instance id."""

    def __init__(self, record_id):
        super().__init__(f"no prediction found for id {record_id!r}")
        self.record_id = record_id


class TranslationError(AdvqaError):
    """The translator failed; carries the instance id when raised inside a pipeline."""

    def __init__(self, message, record_id=None):
        super().__init__(message if record_id is None else f"{message} (instance: {record_id})")
        self.record_id = record_id


class ReportConsistencyError(AdvqaError):
    """Two reports that must cover the same instance ids do not."""
