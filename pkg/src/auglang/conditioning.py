"""Generator conditioning inputs: intent-only prompts and masked prompts.

Masked prompts replace utterance tokens of an augmented sentence with a
sentinel while leaving the intent header, slot-type words and markers
untouched, so the generator keeps the token/label correspondence:

* ``words``: each utterance token independently with ``word_mask_rate``,
  one sentinel per masked token, resampled until at least one is masked;
* ``span``: one contiguous run, collapsed to a single sentinel;
* ``multi_spans``: several non-overlapping, non-adjacent runs.

Runs never cross a marker, so spans stay within one marker-free segment.
All randomness flows through explicit seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .codec import AugmentedSentence, HEADER_KEYWORD, Piece, SlotSchema, encode, parse_augmented
from .errors import MaskingError, SchemaError

MODES = ("intent", "words", "span", "multi_spans")


@dataclass
class MaskPolicy:
    word_mask_rate: float = 0.15
    span_len_min: int = 1
    span_len_max: int = 5
    num_spans_min: int = 2
    num_spans_max: int = 4
    sentinel: str = "<mask>"

    def __post_init__(self):
        if not 0.0 < self.word_mask_rate <= 1.0:
            raise MaskingError(f"word_mask_rate must be in (0, 1], got {self.word_mask_rate}")
        for lo, hi, what in (
            (self.span_len_min, self.span_len_max, "span_len"),
            (self.num_spans_min, self.num_spans_max, "num_spans"),
        ):
            if lo < 1 or hi < lo:
                raise MaskingError(f"{what} bounds must satisfy 1 <= min <= max, got [{lo}, {hi}]")
        if not self.sentinel or any(c.isspace() for c in self.sentinel):
            raise MaskingError("sentinel must be a non-empty whitespace-free token")


@dataclass
class ConditioningInput:
    mode: str
    text: str
    source_index: int | None
    seed: int

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "text": self.text,
            "source_index": self.source_index,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConditioningInput":
        return cls(d["mode"], d["text"], d.get("source_index"), d["seed"])


def _as_rng(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def sample_intent(schema: SlotSchema, rng_seed) -> str:
    """Draw one raw intent uniformly from the schema."""
    rng = _as_rng(rng_seed)
    return schema.intents[int(rng.integers(len(schema.intents)))]


def intent_condition(intent: str, schema: SlotSchema, seed: int = 0) -> ConditioningInput:
    """Header-only prompt ``intent : <normalized intent> ;`` (empty body)."""
    norm = schema.normalized_intent(intent)
    if schema.intent_for_normalized(norm) is None:
        raise SchemaError(f"intent {intent!r} not in schema")
    text = f"{HEADER_KEYWORD} : {norm} ;"
    return ConditioningInput("intent", text, None, seed)


def _parse_for_masking(aug, schema: SlotSchema, policy: MaskPolicy) -> list[Piece]:
    pieces = parse_augmented(aug, schema).pieces
    for piece in pieces:
        if piece.raw == policy.sentinel or piece.value == policy.sentinel:
            raise MaskingError(f"sentinel {policy.sentinel!r} collides with a corpus token")
    return pieces


def _token_positions(pieces: list[Piece]) -> list[int]:
    return [i for i, p in enumerate(pieces) if p.kind == "token"]


def _segments(pieces: list[Piece]) -> list[list[int]]:
    """Piece indices of each marker-free run of utterance tokens."""
    runs: dict[int, list[int]] = {}
    for i, p in enumerate(pieces):
        if p.kind == "token":
            runs.setdefault(p.segment, []).append(i)
    return [runs[k] for k in sorted(runs)]


def _render(pieces: list[Piece], masked_tokens: set[int], span_heads: dict[int, str]) -> str:
    """Reassemble text; masked tokens vanish except span heads -> sentinel."""
    out = []
    for i, p in enumerate(pieces):
        if i in span_heads:
            out.append(span_heads[i])
        elif i in masked_tokens:
            continue
        else:
            out.append(p.raw)
    return " ".join(out)


def _masked_count_given_some(rng: np.random.Generator, n: int, rate: float) -> int:
    """Number of masked tokens under independent Bernoulli(rate) draws
    conditioned on at least one mask: inverse-CDF over the conditional
    binomial. Same law as resampling until non-empty, but constant time
    even for vanishing rates."""
    if rate >= 1.0:
        return n
    prob_none = (1.0 - rate) ** n
    target = prob_none + rng.random() * (1.0 - prob_none)  # uniform over the k>=1 mass
    cdf = prob_none
    pmf = prob_none
    for k in range(1, n):
        # recurrence: pmf(k) = pmf(k-1) * (n-k+1)/k * rate/(1-rate)
        pmf *= (n - k + 1) / k * rate / (1.0 - rate)
        cdf += pmf
        if target <= cdf:
            return k
    return n


def mask_words(aug, schema: SlotSchema, policy: MaskPolicy, rng_seed) -> ConditioningInput:
    """Mask utterance tokens independently, one sentinel per masked token.

    At least one token is always masked; that conditioning is sampled
    exactly (count from the conditional binomial, positions uniform).
    """
    pieces = _parse_for_masking(aug, schema, policy)
    positions = _token_positions(pieces)
    if not positions:
        raise MaskingError("no maskable positions")
    rng = _as_rng(rng_seed)
    count = _masked_count_given_some(rng, len(positions), policy.word_mask_rate)
    chosen = rng.choice(len(positions), size=count, replace=False)
    heads = {positions[i]: policy.sentinel for i in chosen}
    text = _render(pieces, set(), heads)
    seed = rng_seed if isinstance(rng_seed, (int, np.integer)) else -1
    return ConditioningInput("words", text, None, int(seed))


def _place_spans(
    pieces: list[Piece], policy: MaskPolicy, rng: np.random.Generator, num_spans: int
) -> list[list[int]]:
    """Choose up to ``num_spans`` non-overlapping, non-adjacent token runs.

    Each span draws its length uniformly from the policy bounds, clipped to
    the free run it lands in; its start is uniform over all eligible
    positions. Placement stops early when nothing remains, so the result
    holds ``max feasible`` spans when the utterance is too short.
    """
    segments = _segments(pieces)
    available = [[True] * len(seg) for seg in segments]
    spans: list[list[int]] = []
    for _ in range(num_spans):
        length = int(rng.integers(policy.span_len_min, policy.span_len_max + 1))
        candidates: list[tuple[int, int, int]] = []  # (segment, start, span length)
        for si, seg in enumerate(segments):
            run_start = None
            free = available[si] + [False]  # sentinel to close the last run
            for j, ok in enumerate(free):
                if ok and run_start is None:
                    run_start = j
                elif not ok and run_start is not None:
                    run_len = j - run_start
                    eff = min(length, run_len)
                    candidates.extend(
                        (si, run_start + off, eff) for off in range(run_len - eff + 1)
                    )
                    run_start = None
        if not candidates:
            break
        si, start, eff = candidates[int(rng.integers(len(candidates)))]
        spans.append(segments[si][start : start + eff])
        lo = max(0, start - 1)
        hi = min(len(available[si]), start + eff + 1)
        for j in range(lo, hi):
            available[si][j] = False  # span plus adjacency buffer
    return spans


def _mask_spans(aug, schema, policy, rng_seed, num_spans: int, mode: str) -> ConditioningInput:
    pieces = _parse_for_masking(aug, schema, policy)
    if not _token_positions(pieces):
        raise MaskingError("no maskable positions")
    rng = _as_rng(rng_seed)
    spans = _place_spans(pieces, policy, rng, num_spans)
    if not spans:
        raise MaskingError("could not place any span")
    masked = {i for span in spans for i in span}
    heads = {span[0]: policy.sentinel for span in spans}
    text = _render(pieces, masked, heads)
    seed = rng_seed if isinstance(rng_seed, (int, np.integer)) else -1
    return ConditioningInput(mode, text, None, int(seed))


def mask_span(aug, schema: SlotSchema, policy: MaskPolicy, rng_seed) -> ConditioningInput:
    """Mask one contiguous token run, collapsed to a single sentinel."""
    return _mask_spans(aug, schema, policy, rng_seed, 1, "span")


def mask_multi_spans(aug, schema: SlotSchema, policy: MaskPolicy, rng_seed) -> ConditioningInput:
    """Mask several non-overlapping, non-adjacent runs, one sentinel each."""
    rng = _as_rng(rng_seed)
    k = int(rng.integers(policy.num_spans_min, policy.num_spans_max + 1))
    return _mask_spans(aug, schema, policy, rng, k, "multi_spans")


def derive_prompt_seed(rng_seed: int, intent_index: int, prompt_index: int) -> int:
    """Stable per-prompt seed so prompts can be built independently."""
    ss = np.random.SeedSequence([int(rng_seed), int(intent_index), int(prompt_index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def build_requests(
    corpus,
    schema: SlotSchema,
    mode: str,
    count_per_intent: int,
    policy: MaskPolicy,
    rng_seed: int,
) -> list[ConditioningInput]:
    """Build ``count_per_intent`` prompts for every schema intent.

    Masked modes sample source examples uniformly with replacement within
    each intent; ``source_index`` records the example's index in ``corpus``.
    """
    if mode not in MODES:
        raise MaskingError(f"unknown conditioning mode {mode!r}")
    if count_per_intent < 0:
        raise MaskingError("count_per_intent must be >= 0")
    by_intent: dict[str, list[int]] = {intent: [] for intent in schema.intents}
    for idx, ex in enumerate(corpus):
        if ex.intent in by_intent:
            by_intent[ex.intent].append(idx)
    encoded: dict[int, AugmentedSentence] = {}
    prompts: list[ConditioningInput] = []
    for i, intent in enumerate(schema.intents):
        group = by_intent[intent]
        if mode != "intent" and not group:
            raise MaskingError(f"intent {intent!r} has no examples to mask")
        for j in range(count_per_intent):
            seed = derive_prompt_seed(rng_seed, i, j)
            if mode == "intent":
                prompts.append(intent_condition(intent, schema, seed=seed))
                continue
            rng = np.random.default_rng(seed)
            src = group[int(rng.integers(len(group)))]
            if src not in encoded:
                encoded[src] = encode(corpus[src], schema)
            if mode == "words":
                prompt = mask_words(encoded[src], schema, policy, rng)
            elif mode == "span":
                prompt = mask_span(encoded[src], schema, policy, rng)
            else:
                prompt = mask_multi_spans(encoded[src], schema, policy, rng)
            prompt.source_index = src
            prompt.seed = seed
            prompts.append(prompt)
    return prompts


def write_prompts(path: str, prompts: list[ConditioningInput]):
    with open(path, "w", encoding="utf-8") as fh:
        for p in prompts:
            fh.write(json.dumps(p.to_dict(), ensure_ascii=False) + "\n")


def read_prompts(path: str) -> list[ConditioningInput]:
    prompts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                prompts.append(ConditioningInput.from_dict(json.loads(line)))
    return prompts
