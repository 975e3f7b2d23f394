"""Numerical verification suite for the mixout/kernel-regression theory.

Each check reports a measured value against a fixed tolerance; the CLI
serializes the result as JSON. The expensive equivalence checks train a
width-4096 linearized model and can be skipped for a quick run.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .krr import krr_predict, krr_solve
from .linearized import (
    LinearFeatureModel,
    finite_difference_features,
    ntk_features,
    ntk_gram,
    zero_init_head,
)
from .mixture import (
    IdentityCheck,
    MixoutConfig,
    ParamVector,
    apply_mixout,
    expected_quadratic_mixout_loss,
    expected_separable_mixout_loss,
    monte_carlo_mixout_loss,
    quadratic_identity_check,
    quadratic_loss,
    sample_masks,
)
from .training import (
    noise_robustness_probe,
    predict_linearized,
    train_linearized_ridge,
    train_mixout_stochastic,
)

DEFAULT_P_REPLACE = 0.05


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    comparison: str  # "le": value <= tolerance, "ge": value >= tolerance


def _le(name: str, value: float, tol: float) -> Check:
    return Check(name, float(value), tol, bool(value <= tol), "le")


def _ge(name: str, value: float, tol: float) -> Check:
    return Check(name, float(value), tol, bool(value >= tol), "ge")


def _mixture_checks(seed: int) -> list[Check]:
    checks = []
    rng = np.random.default_rng([seed, 1])
    config = MixoutConfig(DEFAULT_P_REPLACE)

    u = rng.standard_normal(200)
    pv = ParamVector(u.copy(), u)
    mask = sample_masks(rng, config.mu, 200)
    checks.append(
        _le("mixture_fixed_point", np.abs(apply_mixout(pv, mask, config.mu) - u).max(), 0.0)
    )

    # Sample mean of the mixture over many masks recovers w coordinate-wise.
    dim = 16
    pv = ParamVector(rng.standard_normal(dim), rng.standard_normal(dim))
    num_masks = 1_000_000
    total = np.zeros(dim)
    total_sq = np.zeros(dim)
    remaining = num_masks
    while remaining:
        batch = min(remaining, 50_000)
        masks = sample_masks(rng, config.mu, (batch, dim))
        phi = pv.u[None, :] + masks * (pv.w - pv.u)[None, :] / config.mu
        total += phi.sum(axis=0)
        total_sq += (phi * phi).sum(axis=0)
        remaining -= batch
    mean = total / num_masks
    var = np.maximum(total_sq / num_masks - mean**2, 0.0) * num_masks / (num_masks - 1)
    stderr = np.sqrt(var / num_masks)
    zscores = np.abs(mean - pv.w) / np.where(stderr > 0, stderr, 1.0)
    checks.append(_le("mixture_expected_params", zscores.max(), 3.0))
    return checks


def _identity_checks(seed: int) -> list[Check]:
    checks = []
    rng = np.random.default_rng([seed, 2])
    worst = 0.0
    for _ in range(100):
        dim = 50
        config = MixoutConfig(float(rng.uniform(0.02, 0.5)), m=float(rng.uniform(0.5, 2.0)))
        w = rng.standard_normal(dim)
        u = rng.standard_normal(dim)
        theta_star = rng.standard_normal(dim)
        worst = max(worst, quadratic_identity_check(w, u, theta_star, config).gap)
    checks.append(_le("quadratic_identity", worst, 1e-12))

    config = MixoutConfig(DEFAULT_P_REPLACE)
    dim = 50
    pv = ParamVector(rng.standard_normal(dim), rng.standard_normal(dim))
    theta_star = rng.standard_normal(dim)
    analytic = expected_quadratic_mixout_loss(pv, theta_star, config)
    mc_mean, mc_se = monte_carlo_mixout_loss(pv, theta_star, config, 1_000_000, seed=seed + 17)
    checks.append(_le("quadratic_identity_monte_carlo", abs(mc_mean - analytic) / mc_se, 3.0))

    # Non-quadratic strongly convex loss: the ridge bound becomes one-sided.
    margin = math.inf
    for _ in range(20):
        config = MixoutConfig(float(rng.uniform(0.05, 0.5)))
        pv = ParamVector(rng.standard_normal(30), rng.standard_normal(30))
        theta_star = rng.standard_normal(30)

        def per_coord(theta, theta_star=theta_star, m=config.m):
            return 0.5 * m * (theta - theta_star) ** 2 + np.logaddexp(0.0, theta)

        lhs = expected_separable_mixout_loss(pv, config.mu, per_coord)
        z = pv.w - pv.u
        rhs = float(per_coord(pv.w).sum()) + 0.5 * config.lam2 * float(z @ z)
        margin = min(margin, lhs - rhs)
    checks.append(_ge("strongly_convex_lower_bound", margin, -1e-9))
    return checks


def _tangent_checks(seed: int) -> list[Check]:
    checks = []
    rng = np.random.default_rng([seed, 3])

    model = zero_init_head(512, 6, rng_seed=seed + 5)
    X = rng.standard_normal((40, 6)) / np.sqrt(6)
    checks.append(_le("anchor_output_zero", np.abs(model.output(model.anchor, X)).max(), 1e-12))
    features = ntk_features(model, X)
    checks.append(_ge("anchor_gradient_norm", np.linalg.norm(features, axis=1).min(), 1e-8))

    small = zero_init_head(16, 5, rng_seed=seed + 6)
    X_small = rng.standard_normal((20, 5)) / np.sqrt(5)
    exact = ntk_features(small, X_small)
    approx = finite_difference_features(small, X_small)
    rel = np.linalg.norm(approx - exact, axis=1) / np.linalg.norm(exact, axis=1)
    checks.append(_le("tangent_features_vs_finite_difference", rel.max(), 1e-5))

    linear = LinearFeatureModel(7)
    X_lin = rng.standard_normal((15, 7))
    checks.append(
        _le("linear_model_features_equal_inputs", np.abs(ntk_features(linear, X_lin) - X_lin).max(), 0.0)
    )

    basis = rng.standard_normal((10, 12))
    K = basis @ basis.T + 0.5 * np.eye(10)
    Y = rng.standard_normal(10)
    lam2 = 0.3
    coeffs = krr_solve(K, Y, lam2)
    residual = np.linalg.norm((K + lam2 * np.eye(10)) @ coeffs - Y)
    checks.append(_le("krr_residual", residual, 1e-10))
    return checks


def _make_regression_problem(seed: int, width: int, n_train: int, n_test: int, in_dim: int):
    # Orthonormal training inputs keep the tangent gram well conditioned,
    # which both trainers and the ridge comparison need at desk scale.
    if in_dim < n_train:
        raise ValueError("in_dim must be >= n_train for orthonormal training inputs")
    rng = np.random.default_rng([seed, 4])
    q, _ = np.linalg.qr(rng.standard_normal((in_dim, n_train)))
    X_train = q.T
    X_test = rng.standard_normal((n_test, in_dim))
    X_test /= np.linalg.norm(X_test, axis=1, keepdims=True)
    direction = rng.standard_normal(in_dim)
    direction /= np.linalg.norm(direction)

    def target(X):
        return np.sin(2.0 * X @ direction) + 0.5 * np.cos(X @ direction)

    model = zero_init_head(width, in_dim, rng_seed=seed + 11)
    return model, X_train, target(X_train), X_test, target(X_test)


def _equivalence_checks(
    seed: int, width: int = 4096, n_train: int = 20, n_test: int = 50, in_dim: int = 20
) -> list[Check]:
    checks = []
    config = MixoutConfig(DEFAULT_P_REPLACE, m=1.0)
    model, X_train, y_train, X_test, y_test = _make_regression_problem(
        seed, width, n_train, n_test, in_dim
    )
    features_train = ntk_features(model, X_train)
    features_test = ntk_features(model, X_test)
    K = ntk_gram(features_train)
    K_cross = ntk_gram(features_test, features_train)
    reference = krr_predict(K_cross, krr_solve(K, y_train, config.lam2))

    ridge = train_linearized_ridge(model, X_train, y_train, config.lam2)
    ridge_pred = predict_linearized(model, ridge.params, X_test)
    rmse = float(np.sqrt(np.mean((ridge_pred - reference) ** 2)))
    checks.append(_le("ridge_descent_matches_krr", rmse, 1e-3))
    checks.append(_le("ridge_descent_gradient_norm", ridge.grad_norm, 1e-8))

    mixout = train_mixout_stochastic(
        model, X_train, y_train, config.p_replace, steps=10_000, seed=seed + 23
    )
    mixout_pred = predict_linearized(model, mixout.params, X_test)
    rmse = float(np.sqrt(np.mean((mixout_pred - reference) ** 2)))
    checks.append(_le("stochastic_mixout_matches_krr", rmse, 5e-2))
    return checks


def _noise_checks(seed: int) -> list[Check]:
    checks = []
    rng = np.random.default_rng([seed, 5])
    in_dim = 6
    n_train, n_test = 60, 200
    X = rng.standard_normal((n_train + n_test, in_dim)) / np.sqrt(in_dim)
    direction = rng.standard_normal(in_dim)
    direction /= np.linalg.norm(direction)
    y = np.tanh(2.0 * X @ direction)
    grid = [1e-8, 1e-3, 1e-2, 0.1, 0.3, 1.0, 3.0, 10.0]
    probe = noise_robustness_probe(
        X[:n_train], y[:n_train], X[n_train:], y[n_train:], 0.30, grid, rng_seed=seed + 31
    )
    diffs = [
        b.train_mse_noisy - a.train_mse_noisy for a, b in zip(probe.rows, probe.rows[1:])
    ]
    checks.append(_ge("noisy_train_fit_monotone", min(diffs), 0.0))
    near_zero = probe.rows[0].test_mse_clean
    best_positive = min(row.test_mse_clean for row in probe.rows[1:])
    checks.append(_le("noise_ridge_benefit", best_positive - near_zero, 0.0))
    return checks


def run_verification(seed: int = 0, include_equivalence: bool = True) -> dict:
    """Run the full suite; returns a JSON-ready report."""
    checks: list[Check] = []
    checks.extend(_mixture_checks(seed))
    checks.extend(_identity_checks(seed))
    checks.extend(_tangent_checks(seed))
    if include_equivalence:
        checks.extend(_equivalence_checks(seed))
    checks.extend(_noise_checks(seed))
    return {
        "seed": seed,
        "checks": [asdict(c) for c in checks],
        "all_passed": all(c.passed for c in checks),
    }
