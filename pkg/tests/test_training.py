from __future__ import annotations

import numpy as np
import pytest

from auglang.errors import DivergenceError, NumericsError
from auglang.mixoutlab import (
    LinearFeatureModel,
    MixoutConfig,
    krr_predict,
    krr_solve,
    noise_robustness_probe,
    ntk_features,
    ntk_gram,
    ones_mask_params,
    predict_linearized,
    train_linearized_ridge,
    train_mixout_stochastic,
    zero_init_head,
)


def small_problem(seed=0, width=192, n_train=12, n_test=25, in_dim=12):
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((in_dim, n_train)))
    X_train = q.T
    X_test = rng.standard_normal((n_test, in_dim))
    X_test /= np.linalg.norm(X_test, axis=1, keepdims=True)
    direction = rng.standard_normal(in_dim)
    direction /= np.linalg.norm(direction)
    y_train = np.sin(2 * X_train @ direction)
    model = zero_init_head(width, in_dim, rng_seed=seed + 1)
    return model, X_train, y_train, X_test


class TestRidgeDescent:
    def test_matches_krr_predictions(self):
        model, X_train, y_train, X_test = small_problem()
        config = MixoutConfig(0.05)
        features = ntk_features(model, X_train)
        K = ntk_gram(features)
        K_cross = ntk_gram(ntk_features(model, X_test), features)
        reference = krr_predict(K_cross, krr_solve(K, y_train, config.lam2))
        result = train_linearized_ridge(model, X_train, y_train, config.lam2)
        assert result.converged
        assert result.grad_norm <= 1e-8
        predictions = predict_linearized(model, result.params, X_test)
        assert np.sqrt(np.mean((predictions - reference) ** 2)) <= 1e-6

    def test_zero_ridge_overdetermined_matches_least_squares(self):
        rng = np.random.default_rng(1)
        model = LinearFeatureModel(4)
        X = rng.standard_normal((30, 4))
        w_true = rng.standard_normal(4)
        y = X @ w_true + 0.1 * rng.standard_normal(30)
        result = train_linearized_ridge(model, X, y, 0.0, tol=1e-10)
        lstsq = np.linalg.lstsq(X, y, rcond=None)[0]
        assert np.abs(result.params - lstsq).max() <= 1e-7

    def test_divergence_detected(self):
        model, X_train, y_train, _ = small_problem()
        with np.errstate(over="ignore", invalid="ignore"), pytest.raises(DivergenceError):
            train_linearized_ridge(model, X_train, y_train, 0.05, lr=100.0, max_steps=5000)

    def test_label_count_mismatch(self):
        model, X_train, y_train, _ = small_problem()
        with pytest.raises(NumericsError):
            train_linearized_ridge(model, X_train, y_train[:-1], 0.05)


class TestStochasticMixout:
    def test_matches_krr_at_loose_tolerance(self):
        model, X_train, y_train, X_test = small_problem()
        config = MixoutConfig(0.05)
        features = ntk_features(model, X_train)
        K = ntk_gram(features)
        K_cross = ntk_gram(ntk_features(model, X_test), features)
        reference = krr_predict(K_cross, krr_solve(K, y_train, config.lam2))
        result = train_mixout_stochastic(
            model, X_train, y_train, config.p_replace, steps=6000, seed=5
        )
        predictions = predict_linearized(model, result.params, X_test)
        assert np.sqrt(np.mean((predictions - reference) ** 2)) <= 5e-2

    def test_deterministic_given_seed(self):
        model, X_train, y_train, _ = small_problem(width=32)
        a = train_mixout_stochastic(model, X_train, y_train, 0.1, steps=200, seed=3)
        b = train_mixout_stochastic(model, X_train, y_train, 0.1, steps=200, seed=3)
        assert np.array_equal(a.params, b.params)

    def test_invalid_p_replace(self):
        model, X_train, y_train, _ = small_problem(width=16)
        with pytest.raises(NumericsError):
            train_mixout_stochastic(model, X_train, y_train, 0.0, steps=10)


def test_ones_mask_params_formula():
    rng = np.random.default_rng(2)
    params = rng.standard_normal(10)
    anchor = rng.standard_normal(10)
    mu = 0.95
    adjusted = ones_mask_params(params, anchor, mu)
    assert np.abs(adjusted - (params - (1 - mu) * anchor) / mu).max() <= 1e-12


class TestNoiseProbe:
    @staticmethod
    def task(seed=0, n_train=50, n_test=150, in_dim=6):
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((n_train + n_test, in_dim)) / np.sqrt(in_dim)
        direction = rng.standard_normal(in_dim)
        direction /= np.linalg.norm(direction)
        y = np.tanh(2.0 * X @ direction)
        return X[:n_train], y[:n_train], X[n_train:], y[n_train:]

    def test_clean_interpolation_at_tiny_ridge(self):
        X_train, y_train, X_test, y_test = self.task()
        probe = noise_robustness_probe(
            X_train, y_train, X_test, y_test, 0.0, [1e-10], rng_seed=1
        )
        assert probe.num_flipped == 0
        assert probe.rows[0].train_mse_noisy <= 1e-10

    def test_train_fit_monotone_in_ridge(self):
        X_train, y_train, X_test, y_test = self.task(seed=3)
        grid = [1e-8, 1e-4, 1e-2, 0.1, 1.0, 10.0, 100.0]
        probe = noise_robustness_probe(
            X_train, y_train, X_test, y_test, 0.3, grid, rng_seed=2
        )
        assert probe.train_fit_non_increasing()
        mses = [row.train_mse_noisy for row in probe.rows]
        assert mses == sorted(mses)

    def test_ridge_beats_interpolation_under_label_noise(self):
        X_train, y_train, X_test, y_test = self.task(seed=4)
        grid = [1e-8, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0]
        probe = noise_robustness_probe(
            X_train, y_train, X_test, y_test, 0.3, grid, rng_seed=5
        )
        near_zero = probe.rows[0].test_mse_clean
        best_positive = min(row.test_mse_clean for row in probe.rows[1:])
        assert best_positive <= near_zero

    def test_flip_count(self):
        X_train, y_train, X_test, y_test = self.task()
        probe = noise_robustness_probe(
            X_train, y_train, X_test, y_test, 0.3, [0.1], rng_seed=0
        )
        assert probe.num_flipped == 15

    def test_invalid_noise_rate(self):
        X_train, y_train, X_test, y_test = self.task()
        with pytest.raises(NumericsError):
            noise_robustness_probe(X_train, y_train, X_test, y_test, 1.0, [0.1])
