"""Assemble the individual generation-quality metrics into one report.

Plain-text versus augmented-format variants of the embedding metrics are
distinguished purely by which embedding file pairs the caller supplies
(e.g. names ``plain``, ``aug``, ``ft_aug``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import MetricError
from .bleu import corpus_bleu4, self_bleu4, sentence_average_bleu4
from .frechet import frechet_distance
from .prd import DEFAULT_NUM_CLUSTERS, DEFAULT_NUM_RATIOS, prd_curve
from .stats import perplexity

UP = "up"  # higher is better
DOWN = "down"  # lower is better


@dataclass
class MetricEntry:
    value: float | tuple[float, float]
    direction: str


@dataclass
class MetricReport:
    entries: dict[str, MetricEntry]

    def to_dict(self) -> dict:
        out = {}
        for name, entry in self.entries.items():
            value = list(entry.value) if isinstance(entry.value, tuple) else entry.value
            out[name] = {"value": value, "direction": entry.direction}
        return {"metrics": out}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, obj: dict) -> "MetricReport":
        entries = {}
        for name, item in obj.get("metrics", {}).items():
            value = item["value"]
            if isinstance(value, list):
                value = tuple(float(v) for v in value)
            else:
                value = float(value)
            entries[name] = MetricEntry(value, item["direction"])
        return cls(entries)

    @classmethod
    def from_json(cls, text: str) -> "MetricReport":
        return cls.from_dict(json.loads(text))


def metric_report(
    real_tokens=None,
    fake_tokens=None,
    embeddings=None,
    logprobs_real=None,
    logprobs_fake=None,
    num_clusters: int = DEFAULT_NUM_CLUSTERS,
    num_ratios: int = DEFAULT_NUM_RATIOS,
    seed: int = 0,
    bleu_mode: str = "corpus",
) -> MetricReport:
    """Compute every metric the supplied inputs allow.

    ``embeddings`` maps a variant name to an (real, generated) embedding
    matrix pair and yields ``fd_<name>`` and ``pr_<name>`` entries; token
    corpora yield BLEU/Self-BLEU; logprob records yield perplexities.
    """
    if bleu_mode not in ("corpus", "sentence"):
        raise MetricError(f"unknown bleu_mode {bleu_mode!r}")
    bleu = corpus_bleu4 if bleu_mode == "corpus" else sentence_average_bleu4
    entries: dict[str, MetricEntry] = {}
    if real_tokens is not None and fake_tokens is not None:
        entries["bleu4"] = MetricEntry(bleu(fake_tokens, real_tokens), UP)
    if real_tokens is not None and len(real_tokens) >= 2:
        entries["self_bleu4_real"] = MetricEntry(self_bleu4(real_tokens), DOWN)
    if fake_tokens is not None and len(fake_tokens) >= 2:
        entries["self_bleu4_fake"] = MetricEntry(self_bleu4(fake_tokens), DOWN)
    if logprobs_real is not None:
        entries["perplexity_real"] = MetricEntry(perplexity(logprobs_real), DOWN)
    if logprobs_fake is not None:
        entries["perplexity_fake"] = MetricEntry(perplexity(logprobs_fake), DOWN)
    for name, (emb_real, emb_fake) in (embeddings or {}).items():
        entries[f"fd_{name}"] = MetricEntry(frechet_distance(emb_real, emb_fake), DOWN)
        curve = prd_curve(
            emb_real, emb_fake, num_clusters=num_clusters, num_ratios=num_ratios, seed=seed
        )
        entries[f"pr_{name}"] = MetricEntry(curve.summary, UP)
    return MetricReport(entries)
