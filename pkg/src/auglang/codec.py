"""Lossless codec between BIO-tagged examples and the augmented-language format.

An augmented sentence is a single whitespace-tokenizable string carrying the
intent and every slot span inline::

    intent : play music ; play [ muse : artist ] on [ spotify : service ]

Grammar, all tokens separated by single spaces:

* header: ``intent : <intent words> ;`` (exactly one per sentence),
* slot span: ``[ <utterance tokens> : <slot type words> ]``,
* everything else: utterance tokens tagged ``O``.

Utterance tokens that contain a reserved character (``[ ] : ;``) or start
with a backslash are written with one leading backslash; decoding strips it.
Label words are normalized (lowercase words, single spaces) and therefore
never collide with markers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    DECODE_DUPLICATE_HEADER,
    DECODE_EMPTY_SPAN,
    DECODE_EMPTY_UTTERANCE,
    DECODE_INVALID_TOKEN,
    DECODE_MALFORMED_SPAN,
    DECODE_MISSING_HEADER,
    DECODE_UNBALANCED,
    DECODE_UNKNOWN_INTENT,
    DECODE_UNKNOWN_SLOT_TYPE,
    BioTagError,
    DecodeError,
    InvalidLabelError,
    SchemaError,
)

RESERVED_CHARS = "[]:;"
HEADER_KEYWORD = "intent"

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")
_SEPARATORS = re.compile(r"[_.\-\s]+")
_NORMALIZED_NAME = re.compile(r"^[a-z0-9]+( [a-z0-9]+)*$")


def normalize_label(raw: str) -> str:
    """Turn a raw label into natural lowercase words.

    Splits on underscores, dots, hyphens, whitespace and lower-to-upper
    camel-case boundaries, lowercases, and joins with single spaces.
    Idempotent on its own output.
    """
    if not raw:
        raise InvalidLabelError("label is empty")
    spaced = _CAMEL_BOUNDARY.sub(" ", raw)
    parts = [p for p in _SEPARATORS.split(spaced) if p]
    if not parts:
        raise InvalidLabelError(f"label {raw!r} contains no word characters")
    return " ".join(p.lower() for p in parts)


@dataclass
class SlotSchema:
    """Label vocabularies: slot-type names and intent names (raw strings).

    Names must be unique after normalization and must normalize to plain
    lowercase words so they can be written inline next to the markers.
    """

    slot_types: tuple[str, ...]
    intents: tuple[str, ...]
    _slot_by_norm: dict[str, str] = field(init=False, repr=False)
    _intent_by_norm: dict[str, str] = field(init=False, repr=False)

    def __post_init__(self):
        self.slot_types = tuple(self.slot_types)
        self.intents = tuple(self.intents)
        if not self.intents:
            raise SchemaError("schema needs at least one intent")
        self._slot_by_norm = self._index("slot type", self.slot_types)
        self._intent_by_norm = self._index("intent", self.intents)

    @staticmethod
    def _index(what: str, names: tuple[str, ...]) -> dict[str, str]:
        by_norm: dict[str, str] = {}
        for name in names:
            norm = normalize_label(name)
            if not _NORMALIZED_NAME.match(norm):
                raise SchemaError(
                    f"{what} {name!r} normalizes to {norm!r}, which is not "
                    "plain lowercase words"
                )
            if norm in by_norm:
                raise SchemaError(
                    f"{what}s {by_norm[norm]!r} and {name!r} collide after "
                    f"normalization ({norm!r})"
                )
            by_norm[norm] = name
        return by_norm

    def has_slot_type(self, raw: str) -> bool:
        return raw in self.slot_types

    def has_intent(self, raw: str) -> bool:
        return raw in self.intents

    def normalized_slot_type(self, raw: str) -> str:
        return normalize_label(raw)

    def normalized_intent(self, raw: str) -> str:
        return normalize_label(raw)

    def slot_type_for_normalized(self, norm: str) -> str | None:
        return self._slot_by_norm.get(norm)

    def intent_for_normalized(self, norm: str) -> str | None:
        return self._intent_by_norm.get(norm)


@dataclass
class LabeledExample:
    """One utterance: tokens, per-token BIO tags, and an intent label."""

    tokens: list[str]
    tags: list[str]
    intent: str

    def key(self) -> tuple:
        """Hashable identity, used for deduplication."""
        return (tuple(self.tokens), tuple(self.tags), self.intent)


@dataclass
class AugmentedSentence:
    """A sentence in the augmented single-string format."""

    text: str


def _split_tag(tag: str, index: int) -> tuple[str, str]:
    if tag == "O":
        return "O", ""
    if tag.startswith("B-") or tag.startswith("I-"):
        if len(tag) == 2:
            raise BioTagError(f"tag {tag!r} at index {index} names no slot type", index)
        return tag[0], tag[2:]
    raise BioTagError(f"tag {tag!r} at index {index} is not O, B-<type> or I-<type>", index)


def validate_example(
    example: LabeledExample, schema: SlotSchema, repair: bool = False
) -> LabeledExample:
    """Check the LabeledExample invariants against ``schema``.

    With ``repair=True``, stray ``I-`` tags (sequence start, after ``O``,
    or after a different slot type) are promoted to ``B-`` and the repaired
    example is returned; otherwise they raise :class:`BioTagError`.
    """
    if len(example.tags) != len(example.tokens):
        raise BioTagError(
            f"{len(example.tags)} tags for {len(example.tokens)} tokens"
        )
    if not example.tokens:
        raise BioTagError("example has no tokens")
    if not schema.has_intent(example.intent):
        raise SchemaError(f"intent {example.intent!r} not in schema")
    tags = list(example.tags)
    prev_type = None  # slot type of an open span, None outside spans
    for i, (token, tag) in enumerate(zip(example.tokens, tags)):
        if not token or token != token.strip() or any(c.isspace() for c in token):
            raise BioTagError(f"token {token!r} at index {i} is empty or has whitespace", i)
        kind, slot_type = _split_tag(tag, i)
        if kind == "O":
            prev_type = None
            continue
        if not schema.has_slot_type(slot_type):
            raise BioTagError(f"slot type {slot_type!r} at index {i} not in schema", i)
        if kind == "I" and slot_type != prev_type:
            if not repair:
                raise BioTagError(
                    f"I-{slot_type} at index {i} does not continue a B-/I-{slot_type} span", i
                )
            tags[i] = "B-" + slot_type
        prev_type = slot_type
    if tags != example.tags:
        return LabeledExample(list(example.tokens), tags, example.intent)
    return example


def escape_token(token: str) -> str:
    if token.startswith("\\") or any(c in RESERVED_CHARS for c in token):
        return "\\" + token
    return token


def unescape_token(raw: str) -> str:
    return raw[1:] if raw.startswith("\\") else raw


def encode(
    example: LabeledExample, schema: SlotSchema, repair: bool = False
) -> AugmentedSentence:
    """Serialize a labeled example to its augmented-sentence string."""
    example = validate_example(example, schema, repair=repair)
    parts = [HEADER_KEYWORD, ":", schema.normalized_intent(example.intent), ";"]
    i, n = 0, len(example.tokens)
    while i < n:
        tag = example.tags[i]
        if tag == "O":
            parts.append(escape_token(example.tokens[i]))
            i += 1
            continue
        slot_type = tag[2:]
        j = i + 1
        while j < n and example.tags[j] == "I-" + slot_type:
            j += 1
        parts.append("[")
        parts.extend(escape_token(t) for t in example.tokens[i:j])
        parts.extend([":", schema.normalized_slot_type(slot_type), "]"])
        i = j
    return AugmentedSentence(" ".join(parts))


@dataclass
class Piece:
    """One surface token of an augmented sentence.

    ``kind`` is ``header`` (the four header tokens plus intent words),
    ``marker`` (``[ ] :``), ``label`` (slot-type words), or ``token``
    (an utterance token; ``value`` holds the unescaped form and ``segment``
    numbers the marker-free run it belongs to).
    """

    raw: str
    kind: str
    value: str = ""
    segment: int = -1


@dataclass
class ParsedAugmented:
    pieces: list[Piece]
    example: LabeledExample


def parse_augmented(text: str | AugmentedSentence, schema: SlotSchema) -> ParsedAugmented:
    """Parse an augmented sentence into surface pieces plus its example.

    Accepts arbitrary strings and raises :class:`DecodeError` with a
    machine-readable code on any violation; never raises anything else.
    """
    if isinstance(text, AugmentedSentence):
        text = text.text
    toks = text.split()
    if len(toks) < 2 or toks[0] != HEADER_KEYWORD or toks[1] != ":":
        raise DecodeError(DECODE_MISSING_HEADER, "sentence does not start with 'intent :'")
    try:
        header_end = toks.index(";", 2)
    except ValueError:
        raise DecodeError(DECODE_MISSING_HEADER, "intent header is not terminated by ';'")
    intent_words = toks[2:header_end]
    if not intent_words:
        raise DecodeError(DECODE_MISSING_HEADER, "intent header names no intent")
    intent_norm = " ".join(intent_words)
    intent_raw = schema.intent_for_normalized(intent_norm)
    if intent_raw is None:
        raise DecodeError(DECODE_UNKNOWN_INTENT, f"unknown intent {intent_norm!r}")

    pieces = [Piece(t, "header") for t in toks[: header_end + 1]]
    tokens: list[str] = []
    tags: list[str] = []
    segment = -1
    open_segment = False
    in_span = False
    span_tokens: list[str] = []
    span_type: list[str] | None = None

    def close_segment():
        nonlocal open_segment
        open_segment = False

    for pos in range(header_end + 1, len(toks)):
        t = toks[pos]
        if t == "[":
            if in_span:
                raise DecodeError(DECODE_UNBALANCED, f"nested '[' at token {pos}")
            in_span, span_tokens, span_type = True, [], None
            pieces.append(Piece(t, "marker"))
            close_segment()
        elif t == "]":
            if not in_span:
                raise DecodeError(DECODE_UNBALANCED, f"']' without '[' at token {pos}")
            if span_type is None:
                raise DecodeError(DECODE_MALFORMED_SPAN, f"span closed at token {pos} has no ':'")
            if not span_tokens:
                raise DecodeError(DECODE_EMPTY_SPAN, f"span closed at token {pos} has no tokens")
            if not span_type:
                raise DecodeError(
                    DECODE_MALFORMED_SPAN, f"span closed at token {pos} names no slot type"
                )
            type_norm = " ".join(span_type)
            type_raw = schema.slot_type_for_normalized(type_norm)
            if type_raw is None:
                raise DecodeError(DECODE_UNKNOWN_SLOT_TYPE, f"unknown slot type {type_norm!r}")
            tokens.extend(span_tokens)
            tags.append("B-" + type_raw)
            tags.extend(["I-" + type_raw] * (len(span_tokens) - 1))
            in_span = False
            pieces.append(Piece(t, "marker"))
            close_segment()
        elif t == ":":
            if not in_span:
                raise DecodeError(DECODE_MALFORMED_SPAN, f"':' outside any span at token {pos}")
            if span_type is not None:
                raise DecodeError(DECODE_MALFORMED_SPAN, f"second ':' inside span at token {pos}")
            span_type = []
            pieces.append(Piece(t, "marker"))
            close_segment()
        elif t == ";":
            raise DecodeError(DECODE_DUPLICATE_HEADER, f"second ';' at token {pos}")
        elif in_span and span_type is not None:
            span_type.append(t)
            pieces.append(Piece(t, "label"))
            close_segment()
        else:
            value = unescape_token(t)
            if not value:
                raise DecodeError(DECODE_INVALID_TOKEN, f"empty utterance token at position {pos}")
            if not open_segment:
                segment += 1
                open_segment = True
            pieces.append(Piece(t, "token", value=value, segment=segment))
            if in_span:
                span_tokens.append(value)
            else:
                tokens.append(value)
                tags.append("O")
    if in_span:
        raise DecodeError(DECODE_UNBALANCED, "unclosed '[' at end of sentence")
    if not tokens:
        raise DecodeError(DECODE_EMPTY_UTTERANCE, "sentence has no utterance tokens")
    return ParsedAugmented(pieces, LabeledExample(tokens, tags, intent_raw))


def decode(aug: str | AugmentedSentence, schema: SlotSchema) -> LabeledExample:
    """Inverse of :func:`encode` on its image; see :func:`parse_augmented`."""
    return parse_augmented(aug, schema).example
