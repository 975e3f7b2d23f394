"""Corpus BLEU-4 and Self-BLEU-4 over tokenized sentences.

The reference set is shared by all candidates (generation-quality usage:
every generated sentence is scored against the whole real corpus). Modified
n-gram precisions are pooled corpus-level, combined by geometric mean with
the standard brevity penalty; zero precisions are floored at a small
epsilon instead of zeroing the whole score.
"""

from __future__ import annotations

import math
from collections import Counter

from ..errors import MetricError

SMOOTHING_EPSILON = 1e-9


def _ngram_counts(tokens, order: int) -> Counter:
    return Counter(tuple(tokens[i : i + order]) for i in range(len(tokens) - order + 1))


def _merged_reference_counts(references, max_order: int) -> list[Counter]:
    merged: list[Counter] = [Counter() for _ in range(max_order)]
    for ref in references:
        for n in range(1, max_order + 1):
            counts = _ngram_counts(ref, n)
            bucket = merged[n - 1]
            for gram, count in counts.items():
                if count > bucket[gram]:
                    bucket[gram] = count
    return merged


def corpus_bleu4(
    candidates,
    references,
    smoothing_epsilon: float = SMOOTHING_EPSILON,
    max_order: int = 4,
) -> float:
    """BLEU with n-gram orders 1..4, candidates pooled at the corpus level.

    ``candidates`` and ``references`` are lists of token sequences; every
    candidate is clipped against the merged counts of all references. The
    brevity penalty uses, per candidate, the reference length closest to the
    candidate length (ties go to the shorter reference).
    """
    if not candidates:
        raise MetricError("empty candidate set")
    if not references:
        raise MetricError("empty reference set")
    candidates = [list(c) for c in candidates]
    references = [list(r) for r in references]
    merged = _merged_reference_counts(references, max_order)
    ref_lengths = sorted(len(r) for r in references)

    matches = [0] * max_order
    possible = [0] * max_order
    cand_total = 0
    ref_total = 0
    for cand in candidates:
        cand_total += len(cand)
        ref_total += min(ref_lengths, key=lambda rl: (abs(rl - len(cand)), rl))
        for n in range(1, max_order + 1):
            counts = _ngram_counts(cand, n)
            bucket = merged[n - 1]
            matches[n - 1] += sum(min(c, bucket[g]) for g, c in counts.items())
            possible[n - 1] += max(len(cand) - n + 1, 0)

    if cand_total == 0:
        return 0.0
    log_sum = 0.0
    for n in range(max_order):
        p = matches[n] / possible[n] if possible[n] > 0 else 0.0
        if p == 0.0:
            p = smoothing_epsilon
        log_sum += math.log(p)
    geo_mean = math.exp(log_sum / max_order)
    bp = 1.0 if cand_total > ref_total else math.exp(1.0 - ref_total / cand_total)
    return min(geo_mean * bp, 1.0)


def sentence_average_bleu4(candidates, references, **kwargs) -> float:
    """Mean of per-sentence BLEU-4, each against the shared reference set."""
    if not candidates:
        raise MetricError("empty candidate set")
    return sum(corpus_bleu4([c], references, **kwargs) for c in candidates) / len(candidates)


def self_bleu4(corpus, **kwargs) -> float:
    """Mean BLEU-4 of each sentence against the rest of the corpus."""
    corpus = [list(c) for c in corpus]
    if len(corpus) < 2:
        raise MetricError("self-BLEU needs at least two sentences")
    total = 0.0
    for i, sentence in enumerate(corpus):
        rest = corpus[:i] + corpus[i + 1 :]
        total += corpus_bleu4([sentence], rest, **kwargs)
    return total / len(corpus)
