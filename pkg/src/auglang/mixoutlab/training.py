"""Gradient-descent training of linearized models and the noise probe.

Two trainers operate on the tangent features A = phi(X):

* ``train_linearized_ridge`` runs full-batch gradient descent on
  0.5 ||A (w - u) - Y||^2 + (lam2 / 2) ||w - u||^2 until the gradient norm
  crosses a threshold; its minimizer is the kernel ridge solution.
* ``train_mixout_stochastic`` resamples a mixout mask every step and
  descends the unregularized loss of the masked linearized model, with
  Polyak averaging of the tail iterates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DivergenceError, NumericsError
from .krr import krr_predict, krr_solve
from .linearized import ntk_features, ntk_gram, zero_init_head

DIVERGENCE_PATIENCE = 100


@dataclass
class GdResult:
    params: np.ndarray  # trained flat parameters (anchor + z)
    steps: int
    grad_norm: float
    converged: bool


def _flat_labels(Y) -> np.ndarray:
    Y = np.asarray(Y, dtype=np.float64)
    return Y.reshape(-1)


def _default_lr(A: np.ndarray, lam2: float) -> float:
    # Smoothness constant of the objective is lambda_max(A^T A) + lam2;
    # the n x n Gram has the same top eigenvalue.
    gram = A @ A.T
    top = float(np.linalg.eigvalsh((gram + gram.T) / 2.0).max())
    return 1.0 / (top + lam2)


def predict_linearized(model, params, X) -> np.ndarray:
    features = ntk_features(model, X)
    return features @ (np.asarray(params, dtype=np.float64) - model.anchor)


def ones_mask_params(params, anchor, mu: float) -> np.ndarray:
    """Test-time convention that applies an all-ones mask: u + (w - u)/mu."""
    params = np.asarray(params, dtype=np.float64)
    anchor = np.asarray(anchor, dtype=np.float64)
    return anchor + (params - anchor) / mu


def train_linearized_ridge(
    model,
    X,
    Y,
    lam2: float,
    max_steps: int = 200_000,
    lr: float | None = None,
    tol: float = 1e-8,
) -> GdResult:
    """Full-batch gradient descent on the explicitly ridge-regularized
    linearized objective, run to gradient norm <= ``tol``."""
    A = ntk_features(model, X)
    y = _flat_labels(Y)
    if A.shape[0] != y.size:
        raise NumericsError(f"{y.size} labels for {A.shape[0]} feature rows")
    if lr is None:
        lr = _default_lr(A, lam2)
    z = np.zeros(A.shape[1])
    prev_loss = np.inf
    bad_streak = 0
    grad_norm = np.inf
    steps = 0
    converged = False
    for steps in range(1, max_steps + 1):
        residual = A @ z - y
        grad = A.T @ residual + lam2 * z
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= tol:
            converged = True
            break
        loss = 0.5 * float(residual @ residual) + 0.5 * lam2 * float(z @ z)
        if not np.isfinite(loss):
            raise DivergenceError(f"loss overflowed at step {steps} (lr={lr:g})")
        if loss > prev_loss:
            bad_streak += 1
            if bad_streak >= DIVERGENCE_PATIENCE:
                raise DivergenceError(
                    f"loss increased for {DIVERGENCE_PATIENCE} consecutive steps "
                    f"(lr={lr:g}); reduce the learning rate"
                )
        else:
            bad_streak = 0
        prev_loss = loss
        z -= lr * grad
    return GdResult(model.anchor + z, steps, grad_norm, converged)


def train_mixout_stochastic(
    model,
    X,
    Y,
    p_replace: float,
    steps: int = 30_000,
    lr: float | None = None,
    seed: int = 0,
    average_fraction: float = 0.5,
) -> GdResult:
    """Mixout training of the linearized model: no explicit ridge, a fresh
    Bernoulli(1 - p_replace) mask every step.

    The returned parameters are the average of the last ``average_fraction``
    of the iterates, which suppresses the mask-sampling noise around the
    limit point.
    """
    if not 0.0 < p_replace < 1.0:
        raise NumericsError(f"p_replace must be in (0, 1), got {p_replace}")
    mu = 1.0 - p_replace
    A = ntk_features(model, X)
    y = _flat_labels(Y)
    if lr is None:
        # The masked gradient has curvature up to ~L / mu^2 along kept
        # coordinates; scale the deterministic step down accordingly.
        lr = _default_lr(A, 0.0) * mu**2
    rng = np.random.default_rng(seed)
    num_params = A.shape[1]
    z = np.zeros(num_params)
    z_sum = np.zeros(num_params)
    averaged = 0
    avg_start = int(steps * (1.0 - average_fraction))
    for step in range(steps):
        mask = rng.random(num_params) < mu
        scaled = np.where(mask, z / mu, 0.0)
        residual = A @ scaled - y
        grad = (A.T @ residual) * mask / mu
        z -= lr * grad
        if not np.isfinite(z).all():
            raise DivergenceError(f"parameters diverged at step {step} (lr={lr:g})")
        if step >= avg_start:
            z_sum += z
            averaged += 1
    z_avg = z_sum / max(averaged, 1)
    residual = A @ z_avg - y
    grad_norm = float(np.linalg.norm(A.T @ residual))
    return GdResult(model.anchor + z_avg, steps, grad_norm, True)


@dataclass
class ProbeRow:
    lam2: float
    train_mse_noisy: float
    test_mse_clean: float


@dataclass
class ProbeResult:
    rows: list[ProbeRow]
    noise_rate: float
    num_flipped: int

    def train_fit_non_increasing(self) -> bool:
        """Fit to the noisy training labels can only degrade as the ridge
        grows (training MSE is non-decreasing along the grid)."""
        mses = [row.train_mse_noisy for row in self.rows]
        return all(b >= a for a, b in zip(mses, mses[1:]))


def noise_robustness_probe(
    X_train,
    Y_train_clean,
    X_test,
    Y_test_clean,
    noise_rate: float,
    lam2_grid,
    rng_seed: int = 0,
    model=None,
) -> ProbeResult:
    """Flip a fraction of training labels, solve KRR along a ridge grid,
    and record noisy-train fit and clean-test error per ridge weight."""
    if not 0.0 <= noise_rate < 1.0:
        raise NumericsError(f"noise_rate must be in [0, 1), got {noise_rate}")
    X_train = np.atleast_2d(np.asarray(X_train, dtype=np.float64))
    X_test = np.atleast_2d(np.asarray(X_test, dtype=np.float64))
    y_train = _flat_labels(Y_train_clean).copy()
    y_test = _flat_labels(Y_test_clean)
    rng = np.random.default_rng(rng_seed)
    if model is None:
        model = zero_init_head(512, X_train.shape[1], rng_seed=rng_seed)
    features_train = ntk_features(model, X_train)
    features_test = ntk_features(model, X_test)
    K = ntk_gram(features_train)
    K_cross = ntk_gram(features_test, features_train)
    num_flipped = int(round(noise_rate * y_train.size))
    flipped = rng.choice(y_train.size, size=num_flipped, replace=False)
    y_train[flipped] = -y_train[flipped]
    rows = []
    for lam2 in sorted(float(v) for v in lam2_grid):
        coeffs = krr_solve(K, y_train, lam2)
        train_pred = krr_predict(K, coeffs)
        test_pred = krr_predict(K_cross, coeffs)
        rows.append(
            ProbeRow(
                lam2=lam2,
                train_mse_noisy=float(np.mean((train_pred - y_train) ** 2)),
                test_mse_clean=float(np.mean((test_pred - y_test) ** 2)),
            )
        )
    return ProbeResult(rows, noise_rate, num_flipped)
