"""Ingest raw generator output lines, keep the decodable ones, count the rest.

Every line is decoded against the schema; failures become per-reason
rejection counts keyed by the decode error codes. Optional deduplication
adds ``duplicate_of_training`` and ``exact_duplicate`` reasons.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codec import LabeledExample, SlotSchema, decode
from .errors import DecodeError


@dataclass
class FilterReport:
    accepted: list[LabeledExample]
    rejected_counts: dict[str, int]
    total: int
    accepted_lines: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "accepted": len(self.accepted),
            "rejected": {k: self.rejected_counts[k] for k in sorted(self.rejected_counts)},
        }


def filter_generations(
    lines,
    schema: SlotSchema,
    dedup_against=None,
    dedup_exact: bool = False,
) -> FilterReport:
    """Decode each line; drop and count the ones that do not parse.

    ``dedup_against`` is an optional iterable of training examples whose
    exact duplicates are rejected as ``duplicate_of_training``;
    ``dedup_exact`` additionally rejects repeats within ``lines``
    (first occurrence wins) as ``exact_duplicate``.
    """
    training_keys = None
    if dedup_against is not None:
        training_keys = {ex.key() for ex in dedup_against}
    seen: set[tuple] = set()
    accepted: list[LabeledExample] = []
    accepted_lines: list[str] = []
    rejected: dict[str, int] = {}
    total = 0
    for line in lines:
        total += 1
        try:
            example = decode(line, schema)
        except DecodeError as exc:
            rejected[exc.code] = rejected.get(exc.code, 0) + 1
            continue
        key = example.key()
        if training_keys is not None and key in training_keys:
            rejected["duplicate_of_training"] = rejected.get("duplicate_of_training", 0) + 1
            continue
        if dedup_exact:
            if key in seen:
                rejected["exact_duplicate"] = rejected.get("exact_duplicate", 0) + 1
                continue
            seen.add(key)
        accepted.append(example)
        accepted_lines.append(line)
    return FilterReport(accepted, rejected, total, accepted_lines)
