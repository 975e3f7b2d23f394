"""Shared random generators for schemas and labeled examples."""

from __future__ import annotations

import random

from auglang.codec import LabeledExample, SlotSchema, normalize_label

# Token alphabet deliberately includes the reserved marker characters and a
# backslash so escaping is exercised, plus some non-ASCII.
TOKEN_ALPHABET = (
    "abcdefghijklmnopqrstuvwxyz" "ABCDEFGHIJKLMNOPQRSTUVWXYZ" "0123456789" "[]:;\\#@'.-_" "éü漢"
)

_LABEL_WORDS = (
    "play", "music", "add", "to", "playlist", "book", "rate", "search", "weather",
    "city", "artist", "service", "object", "type", "time", "range", "creative",
    "work", "restaurant", "screening", "event", "owner", "name", "year", "genre",
    "album", "track", "location", "state", "country", "cuisine", "party", "size",
    "rating", "value", "unit", "sort", "best", "condition", "description", "entity",
)


def _styled_label(rng: random.Random, words: list[str]) -> str:
    style = rng.randrange(4)
    if style == 0:
        return "_".join(words)
    if style == 1:
        return ".".join(words)
    if style == 2:
        return "-".join(words)
    return words[0] + "".join(w.capitalize() for w in words[1:])


def random_labels(rng: random.Random, count: int) -> list[str]:
    labels: list[str] = []
    seen_norm: set[str] = set()
    while len(labels) < count:
        words = [rng.choice(_LABEL_WORDS) for _ in range(rng.randint(1, 3))]
        label = _styled_label(rng, words)
        norm = normalize_label(label)
        if norm not in seen_norm:
            seen_norm.add(norm)
            labels.append(label)
    return labels


def random_schema(
    rng: random.Random, max_slot_types: int = 40, max_intents: int = 20
) -> SlotSchema:
    num_slots = rng.randint(1, max_slot_types)
    num_intents = rng.randint(1, max_intents)
    labels = random_labels(rng, num_slots + num_intents)
    return SlotSchema(tuple(labels[:num_slots]), tuple(labels[num_slots:]))


def random_token(rng: random.Random) -> str:
    return "".join(rng.choice(TOKEN_ALPHABET) for _ in range(rng.randint(1, 8)))


def random_example(
    rng: random.Random, schema: SlotSchema, max_tokens: int = 14
) -> LabeledExample:
    length = rng.randint(1, max_tokens)
    tokens: list[str] = []
    tags: list[str] = []
    while len(tokens) < length:
        remaining = length - len(tokens)
        if rng.random() < 0.45:
            tokens.append(random_token(rng))
            tags.append("O")
        else:
            slot_type = rng.choice(schema.slot_types)
            span = rng.randint(1, min(4, remaining))
            for k in range(span):
                tokens.append(random_token(rng))
                tags.append(("B-" if k == 0 else "I-") + slot_type)
    return LabeledExample(tokens, tags, rng.choice(schema.intents))
