"""Generation-quality metrics: n-gram, likelihood and distribution level."""

from .bleu import corpus_bleu4, self_bleu4, sentence_average_bleu4
from .embeddings import (
    EMB1_MAGIC,
    EmbeddingMatrix,
    read_emb1,
    read_logprobs,
    write_emb1,
    write_logprobs,
)
from .frechet import GaussianMoments, frechet_distance, frechet_from_moments, gaussian_moments
from .prd import PrdCurve, cluster_histograms, prd_curve, prd_curve_from_histograms, summarize_curve
from .report import MetricEntry, MetricReport, metric_report
from .stats import kendall_tau, perplexity

__all__ = [
    "EMB1_MAGIC",
    "EmbeddingMatrix",
    "GaussianMoments",
    "MetricEntry",
    "MetricReport",
    "PrdCurve",
    "cluster_histograms",
    "corpus_bleu4",
    "frechet_distance",
    "frechet_from_moments",
    "gaussian_moments",
    "kendall_tau",
    "metric_report",
    "perplexity",
    "prd_curve",
    "prd_curve_from_histograms",
    "read_emb1",
    "read_logprobs",
    "self_bleu4",
    "sentence_average_bleu4",
    "summarize_curve",
    "write_emb1",
    "write_logprobs",
]
