"""The mixout mixture function and its expected-loss identity.

Mixout replaces a random subset of parameters with their pretrained values:

    Phi(w; u, M) = mu^{-1} (M w + (I - M) u - (1 - mu) u),

equivalently Phi - u = mu^{-1} M (w - u), with a 0/1 mask of mean mu. For an
isotropic quadratic loss L(theta) = (m/2) ||theta - theta*||^2 the expected
loss under the mask satisfies, exactly,

    E[L(Phi)] = L(w) + (m sigma^2 / (2 mu^2)) ||w - u||^2,

and for general strongly convex losses the right-hand side is a lower
bound. Because the mask acts coordinate-wise, expectations of separable
losses reduce to a two-point Bernoulli sum, which is what the analytic
routines here evaluate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NumericsError


@dataclass(frozen=True)
class MixoutConfig:
    """Mask distribution and the ridge weight it induces.

    ``p_replace`` is the probability a coordinate is replaced by its
    pretrained value, so the mask is Bernoulli(1 - p_replace); ``m`` is the
    strong-convexity constant of the target loss.
    """

    p_replace: float
    m: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.p_replace < 1.0:
            raise NumericsError(f"p_replace must be in (0, 1), got {self.p_replace}")
        if self.m <= 0.0:
            raise NumericsError(f"strong-convexity constant must be positive, got {self.m}")

    @property
    def mu(self) -> float:
        return 1.0 - self.p_replace

    @property
    def sigma2(self) -> float:
        return self.p_replace * (1.0 - self.p_replace)

    @property
    def lam2(self) -> float:
        return self.m * self.sigma2 / self.mu**2


@dataclass
class ParamVector:
    """Current parameters ``w`` and the pretrained anchor ``u``."""

    w: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=np.float64)
        self.u = np.asarray(self.u, dtype=np.float64)
        if self.w.shape != self.u.shape:
            raise NumericsError(f"shape mismatch: w {self.w.shape} vs u {self.u.shape}")
        if not (np.isfinite(self.w).all() and np.isfinite(self.u).all()):
            raise NumericsError("parameters contain non-finite values")

    @property
    def dim(self) -> int:
        return self.w.size


def apply_mixout(pv: ParamVector, mask, mu: float) -> np.ndarray:
    """Evaluate the mixture function for one 0/1 mask."""
    if mu <= 0.0:
        raise NumericsError("mask mean mu must be positive")
    mask = np.asarray(mask, dtype=np.float64)
    if mask.shape != pv.w.shape:
        raise NumericsError(f"mask shape {mask.shape} does not match parameters {pv.w.shape}")
    if not np.isin(mask, (0.0, 1.0)).all():
        raise NumericsError("mask entries must be 0 or 1")
    return pv.u + mask * (pv.w - pv.u) / mu


def sample_masks(rng: np.random.Generator, mu: float, shape) -> np.ndarray:
    return (rng.random(shape) < mu).astype(np.float64)


def quadratic_loss(theta, theta_star, m: float = 1.0) -> float:
    diff = np.asarray(theta, dtype=np.float64) - np.asarray(theta_star, dtype=np.float64)
    return 0.5 * m * math.fsum(diff * diff)


def expected_quadratic_mixout_loss(
    pv: ParamVector, theta_star, config: MixoutConfig
) -> float:
    """Exact E[L(Phi)] for the isotropic quadratic loss, via the two-point
    Bernoulli expectation per coordinate (no sampling)."""
    mu = config.mu
    c = pv.u - np.asarray(theta_star, dtype=np.float64)
    z = pv.w - pv.u
    kept = (c + z / mu) ** 2  # mask = 1, probability mu
    dropped = c**2  # mask = 0, probability 1 - mu
    return 0.5 * config.m * math.fsum(mu * kept + (1.0 - mu) * dropped)


def expected_separable_mixout_loss(pv: ParamVector, mu: float, per_coord) -> float:
    """Exact E[sum_i g(Phi_i)] for a coordinate-separable loss.

    ``per_coord`` maps a parameter vector to its per-coordinate loss terms.
    """
    z = pv.w - pv.u
    kept = np.asarray(per_coord(pv.u + z / mu), dtype=np.float64)
    dropped = np.asarray(per_coord(pv.u), dtype=np.float64)
    return math.fsum(mu * kept + (1.0 - mu) * dropped)


@dataclass
class IdentityCheck:
    lhs: float  # analytic expected loss under the mask
    rhs: float  # L(w) plus the induced ridge penalty
    gap: float


def quadratic_identity_check(w, u, theta_star, config: MixoutConfig) -> IdentityCheck:
    """Compare E[L(Phi)] against L(w) + (m sigma^2 / 2 mu^2) ||w - u||^2.

    Both sides are evaluated analytically through different arithmetic
    routes; for quadratic losses the mathematical gap is zero.
    """
    pv = ParamVector(np.asarray(w), np.asarray(u))
    lhs = expected_quadratic_mixout_loss(pv, theta_star, config)
    z = pv.w - pv.u
    penalty = 0.5 * config.m * config.sigma2 / config.mu**2 * math.fsum(z * z)
    rhs = quadratic_loss(pv.w, theta_star, config.m) + penalty
    return IdentityCheck(lhs, rhs, abs(lhs - rhs))


def monte_carlo_mixout_loss(
    pv: ParamVector,
    theta_star,
    config: MixoutConfig,
    num_masks: int,
    seed: int = 0,
    chunk_size: int = 50_000,
) -> tuple[float, float]:
    """Sample-mean estimate of E[L(Phi)] and its standard error."""
    if num_masks < 2:
        raise NumericsError("need at least two masks for a standard error")
    rng = np.random.default_rng(seed)
    c = pv.u - np.asarray(theta_star, dtype=np.float64)
    scaled = (pv.w - pv.u) / config.mu
    total = 0.0
    total_sq = 0.0
    remaining = num_masks
    while remaining > 0:
        batch = min(chunk_size, remaining)
        masks = rng.random((batch, pv.dim)) < config.mu
        losses = 0.5 * config.m * ((c[None, :] + masks * scaled[None, :]) ** 2).sum(axis=1)
        total += float(losses.sum())
        total_sq += float((losses * losses).sum())
        remaining -= batch
    mean = total / num_masks
    var = max(total_sq / num_masks - mean * mean, 0.0) * num_masks / (num_masks - 1)
    return mean, math.sqrt(var / num_masks)
