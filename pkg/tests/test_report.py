from __future__ import annotations

import math

import numpy as np
import pytest

from auglang.errors import MetricError
from auglang.metrics import EmbeddingMatrix, MetricReport, metric_report


@pytest.fixture
def identical_inputs():
    rng = np.random.default_rng(0)
    tokens = [["play", "some", "music", "now"], ["rate", "this", "book", "five", "stars"]]
    emb = EmbeddingMatrix(rng.standard_normal((60, 6)).astype(np.float32))
    logprobs = [[-0.5, -0.25], [-1.0]]
    return tokens, emb, logprobs


def test_identical_inputs_saturate(identical_inputs):
    tokens, emb, logprobs = identical_inputs
    report = metric_report(
        real_tokens=tokens,
        fake_tokens=tokens,
        embeddings={"aug": (emb, emb)},
        logprobs_real=logprobs,
        logprobs_fake=logprobs,
        num_clusters=5,
        seed=0,
    )
    assert report.entries["bleu4"].value == 1.0
    assert report.entries["fd_aug"].value <= 1e-8
    pr = report.entries["pr_aug"].value
    assert pr[0] >= 0.99 and pr[1] >= 0.99
    assert report.entries["perplexity_real"].value == report.entries["perplexity_fake"].value


def test_directions(identical_inputs):
    tokens, emb, logprobs = identical_inputs
    report = metric_report(
        real_tokens=tokens,
        fake_tokens=tokens,
        embeddings={"plain": (emb, emb)},
        logprobs_real=logprobs,
        num_clusters=5,
    )
    assert report.entries["bleu4"].direction == "up"
    assert report.entries["self_bleu4_real"].direction == "down"
    assert report.entries["perplexity_real"].direction == "down"
    assert report.entries["fd_plain"].direction == "down"
    assert report.entries["pr_plain"].direction == "up"


def test_only_supplied_metrics_appear(identical_inputs):
    tokens, _, _ = identical_inputs
    report = metric_report(real_tokens=tokens, fake_tokens=tokens)
    assert set(report.entries) == {"bleu4", "self_bleu4_real", "self_bleu4_fake"}


def test_json_round_trip(identical_inputs):
    tokens, emb, logprobs = identical_inputs
    report = metric_report(
        real_tokens=tokens,
        fake_tokens=tokens,
        embeddings={"aug": (emb, emb)},
        logprobs_real=logprobs,
        logprobs_fake=logprobs,
        num_clusters=5,
    )
    assert MetricReport.from_json(report.to_json()) == report


def test_perplexity_value(identical_inputs):
    tokens, _, logprobs = identical_inputs
    report = metric_report(logprobs_fake=logprobs)
    expected = math.exp(-(-0.5 - 0.25 - 1.0) / 3)
    assert report.entries["perplexity_fake"].value == pytest.approx(expected, abs=1e-12)


def test_bad_bleu_mode_rejected():
    with pytest.raises(MetricError):
        metric_report(bleu_mode="nonsense")
