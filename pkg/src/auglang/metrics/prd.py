"""Precision-recall curves between two sample distributions.

Both sample sets are pooled and clustered with seeded k-means; the
per-cluster histograms P (real) and Q (generated) define the curve over a
grid of ratios lambda = tan(theta):

    alpha(lambda) = sum_i min(lambda * P_i, Q_i)      (precision)
    beta(lambda)  = alpha(lambda) / lambda            (recall)

The scalar summary is (max F_{1/8}, max F_8) over the curve, reported as
(precision_score, recall_score).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.cluster import KMeans

from ..errors import MetricError
from .frechet import _values

DEFAULT_NUM_CLUSTERS = 20
DEFAULT_NUM_RATIOS = 1001
_ANGLE_EPSILON = 1e-10


@dataclass
class PrdCurve:
    precisions: np.ndarray
    recalls: np.ndarray
    ratios: np.ndarray
    num_clusters: int
    summary: tuple[float, float]  # (precision_score, recall_score)

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.precisions.tolist(), self.recalls.tolist()))


def cluster_histograms(real, generated, num_clusters: int, seed: int = 0, max_iter: int = 300):
    """k-means over the pooled samples; returns the two cluster histograms."""
    a = _values(real)
    b = _values(generated)
    if a.shape[1] != b.shape[1]:
        raise MetricError(f"dimension mismatch: {a.shape} vs {b.shape}")
    if min(a.shape[0], b.shape[0]) < num_clusters:
        raise MetricError(
            f"{num_clusters} clusters need at least that many samples on each side "
            f"(got {a.shape[0]} and {b.shape[0]})"
        )
    pooled = np.vstack([a, b])
    km = KMeans(
        n_clusters=num_clusters,
        init="k-means++",
        n_init=1,
        max_iter=max_iter,
        random_state=seed,
    )
    labels = km.fit_predict(pooled)
    hist_real = np.bincount(labels[: a.shape[0]], minlength=num_clusters).astype(np.float64)
    hist_gen = np.bincount(labels[a.shape[0] :], minlength=num_clusters).astype(np.float64)
    return hist_real / a.shape[0], hist_gen / b.shape[0]


def prd_curve_from_histograms(
    hist_real, hist_gen, num_ratios: int = DEFAULT_NUM_RATIOS
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Evaluate (alpha, beta) on the angular ratio grid for two histograms."""
    p = np.asarray(hist_real, dtype=np.float64)
    q = np.asarray(hist_gen, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 1:
        raise MetricError("histograms must be 1-d and equal length")
    if num_ratios < 2:
        raise MetricError("need at least two ratios")
    angles = np.linspace(_ANGLE_EPSILON, np.pi / 2 - _ANGLE_EPSILON, num_ratios)
    ratios = np.tan(angles)
    precisions = np.minimum(ratios[:, None] * p[None, :], q[None, :]).sum(axis=1)
    recalls = precisions / ratios
    return np.clip(precisions, 0.0, 1.0), np.clip(recalls, 0.0, 1.0), ratios


def _f_beta(precision: np.ndarray, recall: np.ndarray, beta: float) -> np.ndarray:
    num = (1 + beta**2) * precision * recall
    den = beta**2 * precision + recall
    return np.divide(num, den, out=np.zeros_like(num), where=den > 0)


def summarize_curve(precisions, recalls, beta: float = 8.0) -> tuple[float, float]:
    """(max F_{1/beta}, max F_beta): precision-leaning and recall-leaning."""
    precision_score = float(_f_beta(precisions, recalls, 1.0 / beta).max())
    recall_score = float(_f_beta(precisions, recalls, beta).max())
    return precision_score, recall_score


def prd_curve(
    real,
    generated,
    num_clusters: int = DEFAULT_NUM_CLUSTERS,
    num_ratios: int = DEFAULT_NUM_RATIOS,
    seed: int = 0,
) -> PrdCurve:
    """Full pipeline: pooled k-means, histograms, ratio grid, summary pair."""
    hist_real, hist_gen = cluster_histograms(real, generated, num_clusters, seed=seed)
    precisions, recalls, ratios = prd_curve_from_histograms(hist_real, hist_gen, num_ratios)
    return PrdCurve(
        precisions=precisions,
        recalls=recalls,
        ratios=ratios,
        num_clusters=num_clusters,
        summary=summarize_curve(precisions, recalls),
    )
