"""Exception taxonomy shared across the toolkit.

Every error carries a short machine-readable ``code``; the CLI serializes it
to JSON on stderr and the generation filter uses decode codes as rejection
reasons.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit failures."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InvalidLabelError(ToolkitError):
    code = "invalid_label"


class SchemaError(ToolkitError):
    code = "invalid_schema"


class BioTagError(ToolkitError):
    """Tag sequence violates the BIO contract; ``index`` names the offender."""

    code = "invalid_bio_tags"

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class DecodeError(ToolkitError):
    """Augmented-format string cannot be decoded; ``code`` is the reason."""

    def __init__(self, code: str, message: str):
        super().__init__(message, code=code)


# Decode reason codes, also the rejection vocabulary of the generation filter.
DECODE_MISSING_HEADER = "missing_intent_header"
DECODE_DUPLICATE_HEADER = "duplicate_intent_header"
DECODE_UNBALANCED = "unbalanced_markers"
DECODE_MALFORMED_SPAN = "malformed_span"
DECODE_UNKNOWN_SLOT_TYPE = "unknown_slot_type"
DECODE_UNKNOWN_INTENT = "unknown_intent"
DECODE_EMPTY_SPAN = "empty_span"
DECODE_EMPTY_UTTERANCE = "empty_utterance"
DECODE_INVALID_TOKEN = "invalid_token"


class CorpusFormatError(ToolkitError):
    code = "corpus_format"


class MaskingError(ToolkitError):
    code = "masking"


class EmbeddingFormatError(ToolkitError):
    code = "embedding_format"


class MetricError(ToolkitError):
    code = "metric"


class UndefinedCorrelationError(MetricError):
    code = "undefined_correlation"


class NumericsError(ToolkitError):
    code = "numerics"


class SingularSystemError(NumericsError):
    code = "singular_system"


class DivergenceError(NumericsError):
    code = "divergence"


class GenerationProtocolError(ToolkitError):
    code = "generation_protocol"


class ConfigError(ToolkitError):
    code = "config"
