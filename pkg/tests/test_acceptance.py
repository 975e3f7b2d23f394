"""Acceptance suite: one test per release criterion, each at its stated
tolerance, printing one PASS line on success (run with ``pytest -s`` to see
them inline)."""

from __future__ import annotations

import math
import os
import random
import time
from collections import Counter

import numpy as np

from auglang.codec import decode, encode
from auglang.genfilter import filter_generations
from auglang.metrics import (
    corpus_bleu4,
    frechet_distance,
    gaussian_moments,
    kendall_tau,
    prd_curve,
    prd_curve_from_histograms,
    self_bleu4,
)
from auglang.mixoutlab import (
    MixoutConfig,
    ParamVector,
    expected_quadratic_mixout_loss,
    finite_difference_features,
    krr_predict,
    krr_solve,
    monte_carlo_mixout_loss,
    noise_robustness_probe,
    ntk_features,
    ntk_gram,
    predict_linearized,
    quadratic_identity_check,
    train_linearized_ridge,
    train_mixout_stochastic,
    zero_init_head,
)
from auglang.mixoutlab.verify import _make_regression_problem
from auglang.pipeline import subsample_per_intent

from test_bleu import CANDS, REFS, oracle_bleu4
from test_cli import read_bytes, run_file_mode_pipeline
from test_frechet import diagonalize_sample
from test_stats import tau_oracle
from util import random_example, random_schema


def ok(name: str):
    print(f"ACCEPTANCE PASS: {name}")


def test_codec_round_trip_10k_examples():
    rng = random.Random(424242)
    start = time.monotonic()
    failures = 0
    total = 0
    for _ in range(100):
        schema = random_schema(rng, max_slot_types=40, max_intents=20)
        for _ in range(100):
            example = random_example(rng, schema)
            total += 1
            if decode(encode(example, schema), schema) != example:
                failures += 1
    elapsed = time.monotonic() - start
    assert total == 10_000
    assert failures == 0
    assert elapsed < 10.0, f"round-trip took {elapsed:.1f}s"
    ok(f"codec round-trip: 10,000 examples, 0 failures, {elapsed:.1f}s")


def test_filter_audit_exact_reason_counts(toy_schema, toy_corpus):
    rng = random.Random(1)
    valid = [encode(toy_corpus[i % len(toy_corpus)], toy_schema).text for i in range(70)]
    invalid = (
        ["intent : play music ; play [ muse artist ]"] * 10  # malformed span
        + ["intent : play music ; [ muse : dragon ]"] * 10  # unknown slot type
        + ["intent : fly me ; book [ paris : city ]"] * 10  # unknown intent
    )
    lines = valid + invalid
    rng.shuffle(lines)
    report = filter_generations(lines, toy_schema)
    assert report.total == 100
    assert len(report.accepted) == 70
    assert report.rejected_counts == {
        "malformed_span": 10,
        "unknown_slot_type": 10,
        "unknown_intent": 10,
    }
    ok("filter audit: 70 accepted, exact per-reason counts (10/10/10)")


def test_frechet_distance_criteria():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((500, 16))
    assert frechet_distance(a, a) <= 1e-8

    x = rng.normal(0.4, 1.3, size=(400, 1))
    y = rng.normal(-0.2, 0.6, size=(350, 1))
    mx, my = gaussian_moments(x), gaussian_moments(y)
    closed_1d = (mx.mean[0] - my.mean[0]) ** 2 + (
        math.sqrt(mx.cov[0, 0]) - math.sqrt(my.cov[0, 0])
    ) ** 2
    assert abs(frechet_distance(x, y) - closed_1d) <= 1e-6

    p = diagonalize_sample(np.random.default_rng(1), 300, 6, scale=1.4)
    q = diagonalize_sample(np.random.default_rng(2), 280, 6, scale=0.7, shift=0.3)
    mp, mq = gaussian_moments(p), gaussian_moments(q)
    closed_diag = float(
        ((mp.mean - mq.mean) ** 2).sum()
        + ((np.sqrt(np.diag(mp.cov)) - np.sqrt(np.diag(mq.cov))) ** 2).sum()
    )
    assert abs(frechet_distance(p, q) - closed_diag) <= 1e-6
    ok("Frechet distance: self-zero 1e-8, 1-d and diagonal closed forms 1e-6")


def test_prd_criteria():
    rng = np.random.default_rng(3)
    same = rng.standard_normal((1000, 8))
    summary = prd_curve(same, same, num_clusters=20, seed=0).summary
    assert summary[0] >= 0.95 and summary[1] >= 0.95

    far = rng.standard_normal((1000, 8)) + 100.0
    summary_far = prd_curve(same, far, num_clusters=20, seed=0).summary
    assert summary_far[0] <= 0.05 and summary_far[1] <= 0.05

    p = np.array([0.5, 0.5, 0.0])
    q = np.array([0.0, 0.5, 0.5])
    precisions, recalls, ratios = prd_curve_from_histograms(p, q, num_ratios=1001)
    for lam, alpha, beta in zip(ratios, precisions, recalls):
        direct = sum(min(lam * pi, qi) for pi, qi in zip(p, q))
        assert abs(alpha - min(direct, 1.0)) <= 1e-12
        assert abs(beta - min(direct / lam, 1.0)) <= 1e-12
    ok("PRD: identical >= (0.95, 0.95), separated <= (0.05, 0.05), oracle 1e-12")


def test_bleu_criteria():
    assert abs(corpus_bleu4(CANDS, REFS) - oracle_bleu4(CANDS, REFS)) <= 1e-9
    assert abs(corpus_bleu4(CANDS, REFS) - 0.3696088397848108) <= 1e-9
    corpus = [
        "the quick brown fox jumps".split(),
        "the quick brown dog runs".split(),
        "a lazy dog sleeps here".split(),
        "the quick red fox jumps high".split(),
    ]
    loo = sum(
        oracle_bleu4([s], corpus[:i] + corpus[i + 1 :]) for i, s in enumerate(corpus)
    ) / len(corpus)
    assert abs(self_bleu4(corpus) - loo) <= 1e-9
    assert self_bleu4([["all", "the", "same", "words"]] * 4) == 1.0
    ok("BLEU/Self-BLEU: hand-oracle agreement 1e-9, identical-corpus Self-BLEU 1.0")


def test_kendall_tau_criterion():
    rng = random.Random(77)
    for _ in range(100):
        xs = [rng.randint(0, 25) for _ in range(200)]
        ys = [rng.randint(0, 25) for _ in range(200)]
        assert kendall_tau(xs, ys) == tau_oracle(xs, ys)
    ok("Kendall tau: exact match with pair enumeration, 100 trials with ties")


def test_quadratic_identity_criterion():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        config = MixoutConfig(float(rng.uniform(0.02, 0.5)), m=float(rng.uniform(0.5, 2.0)))
        w = rng.standard_normal(50)
        u = rng.standard_normal(50)
        theta_star = rng.standard_normal(50)
        worst = max(worst, quadratic_identity_check(w, u, theta_star, config).gap)
    assert worst <= 1e-12

    config = MixoutConfig(0.05)
    pv = ParamVector(rng.standard_normal(50), rng.standard_normal(50))
    theta_star = rng.standard_normal(50)
    analytic = expected_quadratic_mixout_loss(pv, theta_star, config)
    mc, se = monte_carlo_mixout_loss(pv, theta_star, config, 1_000_000, seed=55)
    assert abs(mc - analytic) <= 3 * se
    ok(f"mixout quadratic identity: max gap {worst:.2e} <= 1e-12, Monte-Carlo within 3 SE")


def test_krr_equivalence_criterion():
    start = time.monotonic()
    config = MixoutConfig(0.05, m=1.0)
    model, X_train, y_train, X_test, _ = _make_regression_problem(0, 4096, 20, 50, 20)
    features_train = ntk_features(model, X_train)
    K = ntk_gram(features_train)
    K_cross = ntk_gram(ntk_features(model, X_test), features_train)
    reference = krr_predict(K_cross, krr_solve(K, y_train, config.lam2))

    ridge = train_linearized_ridge(model, X_train, y_train, config.lam2)
    ridge_rmse = float(
        np.sqrt(np.mean((predict_linearized(model, ridge.params, X_test) - reference) ** 2))
    )
    assert ridge_rmse <= 1e-3

    mixout = train_mixout_stochastic(model, X_train, y_train, 0.05, steps=10_000, seed=23)
    mixout_rmse = float(
        np.sqrt(np.mean((predict_linearized(model, mixout.params, X_test) - reference) ** 2))
    )
    assert mixout_rmse <= 5e-2
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"equivalence checks took {elapsed:.0f}s"
    ok(
        "kernel ridge equivalence: explicit-ridge GD rmse "
        f"{ridge_rmse:.1e} <= 1e-3, stochastic mixout rmse {mixout_rmse:.1e} <= 5e-2, "
        f"{elapsed:.0f}s"
    )


def test_tangent_gradient_criterion():
    rng = np.random.default_rng(21)
    model = zero_init_head(16, 5, rng_seed=9)
    X = rng.standard_normal((20, 5)) / np.sqrt(5)
    exact = ntk_features(model, X)
    approx = finite_difference_features(model, X)
    rel = np.linalg.norm(approx - exact, axis=1) / np.linalg.norm(exact, axis=1)
    assert rel.max() <= 1e-5
    ok(f"tangent features vs finite differences: max rel err {rel.max():.1e} <= 1e-5")


def test_noise_robustness_criterion():
    rng = np.random.default_rng(31)
    in_dim, n_train, n_test = 6, 60, 200
    X = rng.standard_normal((n_train + n_test, in_dim)) / np.sqrt(in_dim)
    direction = rng.standard_normal(in_dim)
    direction /= np.linalg.norm(direction)
    y = np.tanh(2.0 * X @ direction)
    grid = [1e-8, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0]
    probe = noise_robustness_probe(
        X[:n_train], y[:n_train], X[n_train:], y[n_train:], 0.30, grid, rng_seed=13
    )
    mses = [row.train_mse_noisy for row in probe.rows]
    assert mses == sorted(mses)  # fit to noisy labels only degrades with ridge
    near_zero = probe.rows[0].test_mse_clean
    best_positive = min(row.test_mse_clean for row in probe.rows[1:])
    assert best_positive <= near_zero
    ok(
        "noise robustness: train fit monotone, best ridge test MSE "
        f"{best_positive:.3f} <= near-zero-ridge {near_zero:.3f}"
    )


def test_subsampling_criterion(toy_corpus):
    intents = {ex.intent for ex in toy_corpus}
    floor_ratio = 1.0 / len(toy_corpus)
    for ratio in (floor_ratio, 0.1, 0.25, 0.5, 0.75, 1.0):
        for seed in (0, 1, 2):
            kept = subsample_per_intent(toy_corpus, ratio, seed)
            assert {ex.intent for ex in kept} == intents
            assert subsample_per_intent(toy_corpus, ratio, seed) == kept
    ok("subsampling: every intent present at every ratio, deterministic per seed")


def test_pipeline_determinism_criterion(tmp_path, fixtures_dir):
    train = os.path.join(fixtures_dir, "train.conll")
    dir_a = tmp_path / "run_a"
    dir_b = tmp_path / "run_b"
    dir_a.mkdir()
    dir_b.mkdir()
    paths_a = run_file_mode_pipeline(str(dir_a), train)
    paths_b = run_file_mode_pipeline(str(dir_b), train)
    for key in ("prompts", "accepted", "filter_report", "agg"):
        assert read_bytes(paths_a[key]) == read_bytes(paths_b[key]), key
    ok("pipeline determinism: prompt, filtered-corpus and report files byte-identical")
