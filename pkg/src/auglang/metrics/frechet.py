"""Frechet distance between embedding sets via fitted Gaussian moments.

d^2 = ||mu_1 - mu_2||^2 + Tr(S_1 + S_2 - 2 (S_1 S_2)^{1/2})

The matrix square root is evaluated through the symmetric product
sqrt(S_1) S_2 sqrt(S_1): both roots come from eigendecompositions with
small negative eigenvalues clamped to zero, which keeps the result real
and the distance nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import MetricError
from .embeddings import EmbeddingMatrix

SYMMETRY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-8


@dataclass
class GaussianMoments:
    mean: np.ndarray  # (d,)
    cov: np.ndarray  # (d, d), symmetric PSD after clamping

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.cov = np.asarray(self.cov, dtype=np.float64)
        if self.mean.ndim != 1 or self.cov.shape != (self.mean.size, self.mean.size):
            raise MetricError(
                f"moment shapes disagree: mean {self.mean.shape}, cov {self.cov.shape}"
            )


def _values(matrix) -> np.ndarray:
    if isinstance(matrix, EmbeddingMatrix):
        return matrix.values.astype(np.float64)
    return np.asarray(matrix, dtype=np.float64)


def gaussian_moments(matrix) -> GaussianMoments:
    """Sample mean and unbiased (n-1) sample covariance of the rows."""
    values = _values(matrix)
    if values.ndim != 2 or values.shape[0] < 2:
        raise MetricError("moment estimation needs a 2-d matrix with at least 2 rows")
    mean = values.mean(axis=0)
    centered = values - mean
    cov = centered.T @ centered / (values.shape[0] - 1)
    cov = (cov + cov.T) / 2.0
    return GaussianMoments(mean, cov)


def _psd_sqrt(cov: np.ndarray, what: str) -> np.ndarray:
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals.min(initial=0.0) < EIGENVALUE_FLOOR * max(1.0, abs(eigvals).max(initial=1.0)):
        raise MetricError(f"{what} has a significantly negative eigenvalue: {eigvals.min()}")
    root = np.sqrt(np.clip(eigvals, 0.0, None))
    return (eigvecs * root) @ eigvecs.T


def frechet_from_moments(a: GaussianMoments, b: GaussianMoments) -> float:
    if a.mean.shape != b.mean.shape:
        raise MetricError(
            f"moment dimensions disagree: {a.mean.shape[0]} vs {b.mean.shape[0]}"
        )
    for moments, name in ((a, "first covariance"), (b, "second covariance")):
        asym = np.abs(moments.cov - moments.cov.T).max(initial=0.0)
        if asym > SYMMETRY_TOL * max(1.0, np.abs(moments.cov).max(initial=1.0)):
            raise MetricError(f"{name} is not symmetric (max asymmetry {asym})")
    diff = a.mean - b.mean
    sqrt_a = _psd_sqrt(a.cov, "first covariance")
    inner = sqrt_a @ b.cov @ sqrt_a
    inner = (inner + inner.T) / 2.0
    eigvals = np.linalg.eigvalsh(inner)
    trace_sqrt = np.sqrt(np.clip(eigvals, 0.0, None)).sum()
    value = float(diff @ diff + np.trace(a.cov) + np.trace(b.cov) - 2.0 * trace_sqrt)
    return max(value, 0.0)


def frechet_distance(matrix_a, matrix_b) -> float:
    """Frechet distance between two row-sample matrices of equal dimension."""
    a = _values(matrix_a)
    b = _values(matrix_b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise MetricError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return frechet_from_moments(gaussian_moments(a), gaussian_moments(b))
