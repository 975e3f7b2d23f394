"""Small dense networks with exactly-zero anchor output and their tangent
feature maps.

The verification models are differences of two identical one-hidden-layer
tanh networks sharing their initialization, so the output at the anchor is
identically zero while the gradient there is generically nonzero. Training
the linearization of such a model is plain regression on the tangent
features phi(x) = grad_theta f(x; u).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericsError


@dataclass
class PairedTanhHead:
    """f(x; theta) = h(x; theta_plus) - h(x; theta_minus) with
    h(x; W, A) = scale * A tanh(W x); both branches start at (W0, A0).

    Flat parameter layout: [W_plus, A_plus, W_minus, A_minus], row-major.
    """

    w_hidden: np.ndarray  # (width, in_dim)
    a_out: np.ndarray  # (out_dim, width)
    scale: float

    def __post_init__(self):
        self.w_hidden = np.asarray(self.w_hidden, dtype=np.float64)
        self.a_out = np.asarray(self.a_out, dtype=np.float64)

    @property
    def width(self) -> int:
        return self.w_hidden.shape[0]

    @property
    def in_dim(self) -> int:
        return self.w_hidden.shape[1]

    @property
    def out_dim(self) -> int:
        return self.a_out.shape[0]

    @property
    def branch_params(self) -> int:
        return self.w_hidden.size + self.a_out.size

    @property
    def num_params(self) -> int:
        return 2 * self.branch_params

    @property
    def anchor(self) -> np.ndarray:
        branch = np.concatenate([self.w_hidden.ravel(), self.a_out.ravel()])
        return np.concatenate([branch, branch])

    def _split(self, theta: np.ndarray):
        nw = self.w_hidden.size
        nb = self.branch_params
        def branch(vec):
            return vec[:nw].reshape(self.w_hidden.shape), vec[nw:].reshape(self.a_out.shape)
        return branch(theta[:nb]), branch(theta[nb:])

    def _branch_output(self, w, a, X):
        return self.scale * np.tanh(X @ w.T) @ a.T

    def output(self, theta, X) -> np.ndarray:
        """Full (non-linearized) network output, shape (n, out_dim)."""
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.num_params,):
            raise NumericsError(f"expected {self.num_params} parameters, got {theta.shape}")
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        (wp, ap), (wm, am) = self._split(theta)
        return self._branch_output(wp, ap, X) - self._branch_output(wm, am, X)

    def feature_matrix(self, X) -> np.ndarray:
        """Exact gradients at the anchor, one row per (sample, output).

        Shape (n, num_params) for scalar output, (n * out_dim, num_params)
        otherwise; the minus branch contributes the negated plus-branch
        gradient.
        """
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        n = X.shape[0]
        pre = X @ self.w_hidden.T  # (n, width)
        act = np.tanh(pre)
        sech2 = 1.0 - act**2
        rows = np.empty((n * self.out_dim, self.num_params))
        nw = self.w_hidden.size
        nb = self.branch_params
        for k in range(self.out_dim):
            # d out_k / d W[j, i] = scale * A[k, j] * sech2_j * x_i
            grad_w = (self.scale * self.a_out[k][None, :] * sech2)[:, :, None] * X[:, None, :]
            grad_w = grad_w.reshape(n, nw)
            grad_a = np.zeros((n, self.a_out.size))
            grad_a[:, k * self.width : (k + 1) * self.width] = self.scale * act
            block = np.concatenate([grad_w, grad_a], axis=1)
            rows[k::self.out_dim, :nb] = block
            rows[k::self.out_dim, nb:] = -block
        if not np.isfinite(rows).all():
            raise NumericsError("non-finite tangent features")
        return rows


def zero_init_head(
    width: int, in_dim: int, out_dim: int = 1, rng_seed: int = 0, scale: float | None = None
) -> PairedTanhHead:
    """Build a paired head whose anchor output is exactly zero everywhere.

    Hidden weights are N(0, 1/in_dim) so preactivations stay in the tanh
    active range for unit-scale inputs; ``scale`` defaults to sqrt(2/width),
    which keeps the tangent kernel O(1) as the width grows.
    """
    rng = np.random.default_rng(rng_seed)
    w = rng.standard_normal((width, in_dim)) / np.sqrt(in_dim)
    a = rng.standard_normal((out_dim, width))
    if scale is None:
        scale = np.sqrt(2.0 / width)
    return PairedTanhHead(w, a, float(scale))


class LinearFeatureModel:
    """f(x; theta) = theta^T x with zero anchor; tangent features are the
    inputs themselves."""

    def __init__(self, in_dim: int):
        self.in_dim = in_dim
        self.num_params = in_dim

    @property
    def anchor(self) -> np.ndarray:
        return np.zeros(self.in_dim)

    def output(self, theta, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return (X @ np.asarray(theta, dtype=np.float64))[:, None]

    def feature_matrix(self, X) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=np.float64)).copy()


def ntk_features(model, X) -> np.ndarray:
    """Tangent feature matrix of ``model`` at its anchor."""
    features = model.feature_matrix(X)
    if not np.isfinite(features).all():
        raise NumericsError("non-finite tangent features")
    return features


def ntk_gram(features_a: np.ndarray, features_b: np.ndarray | None = None) -> np.ndarray:
    """Kernel matrix k(X, X') = <phi(x), phi(x')> from feature rows."""
    if features_b is None:
        gram = features_a @ features_a.T
        return (gram + gram.T) / 2.0
    return features_a @ features_b.T


def finite_difference_features(model, X, step: float = 1e-4) -> np.ndarray:
    """Central-difference approximation of the tangent features.

    Intended as an independent check for small models; cost is two network
    evaluations per parameter.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    anchor = model.anchor
    num_params = anchor.size
    n = X.shape[0]
    probe = model.output(anchor, X)
    out_dim = probe.shape[1]
    rows = np.empty((n * out_dim, num_params))
    for i in range(num_params):
        theta_plus = anchor.copy()
        theta_plus[i] += step
        theta_minus = anchor.copy()
        theta_minus[i] -= step
        delta = (model.output(theta_plus, X) - model.output(theta_minus, X)) / (2.0 * step)
        rows[:, i] = delta.reshape(-1)
    return rows
