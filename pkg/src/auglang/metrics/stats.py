"""Corpus perplexity and Kendall rank correlation (tau-b)."""

from __future__ import annotations

import math
from collections import Counter

from ..errors import MetricError, UndefinedCorrelationError


def perplexity(logprob_records) -> float:
    """Corpus-level perplexity exp(-sum(logp) / token count).

    ``logprob_records`` is one sequence of natural-log token probabilities
    per sentence; all tokens are pooled.
    """
    total_tokens = 0
    logps: list[float] = []
    for record in logprob_records:
        for value in record:
            value = float(value)
            if not math.isfinite(value):
                raise MetricError(f"non-finite log-probability {value!r}")
            logps.append(value)
            total_tokens += 1
    if total_tokens == 0:
        raise MetricError("no tokens to score")
    return math.exp(-math.fsum(logps) / total_tokens)


def _merge_count(values: list) -> tuple[list, int]:
    """Mergesort returning (sorted values, strict inversions)."""
    n = len(values)
    if n <= 1:
        return values, 0
    mid = n // 2
    left, swaps_left = _merge_count(values[:mid])
    right, swaps_right = _merge_count(values[mid:])
    merged = []
    swaps = swaps_left + swaps_right
    i = j = 0
    while i < len(left) and j < len(right):
        if right[j] < left[i]:
            swaps += len(left) - i  # every remaining left element is inverted
            merged.append(right[j])
            j += 1
        else:
            merged.append(left[i])
            i += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, swaps


def _tie_pairs(values) -> int:
    return sum(t * (t - 1) // 2 for t in Counter(values).values())


def kendall_tau(xs, ys) -> float:
    """Tie-corrected tau-b: (concordant - discordant) / sqrt((n0-n1)(n0-n2)).

    Discordant pairs are counted with Knight's mergesort method; ties in
    both coordinates contribute to neither side.
    """
    xs = list(xs)
    ys = list(ys)
    if len(xs) != len(ys):
        raise MetricError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise MetricError("correlation needs at least two pairs")
    n0 = n * (n - 1) // 2
    n1 = _tie_pairs(xs)
    n2 = _tie_pairs(ys)
    if n0 == n1 or n0 == n2:
        raise UndefinedCorrelationError("all pairs tied in one coordinate")
    n_both = _tie_pairs(list(zip(xs, ys)))
    order = sorted(range(n), key=lambda i: (xs[i], ys[i]))
    _, discordant = _merge_count([ys[i] for i in order])
    concordant = n0 - n1 - n2 + n_both - discordant
    numerator = concordant - discordant
    return numerator / math.sqrt((n0 - n1) * (n0 - n2))
