"""Kernel ridge regression: dual solve and prediction."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from ..errors import NumericsError, SingularSystemError

KERNEL_SYMMETRY_TOL = 1e-8


def krr_solve(K, Y, lam2: float) -> np.ndarray:
    """Dual coefficients (K + lam2 I)^{-1} Y via Cholesky factorization."""
    K = np.asarray(K, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise NumericsError(f"kernel matrix must be square, got {K.shape}")
    if Y.shape[0] != K.shape[0]:
        raise NumericsError(f"{Y.shape[0]} labels for a {K.shape[0]}-point kernel")
    if lam2 < 0.0:
        raise NumericsError("ridge weight must be nonnegative")
    scale = max(1.0, float(np.abs(K).max(initial=1.0)))
    if np.abs(K - K.T).max(initial=0.0) > KERNEL_SYMMETRY_TOL * scale:
        raise NumericsError("kernel matrix is not symmetric")
    system = K + lam2 * np.eye(K.shape[0])
    try:
        factor = scipy.linalg.cho_factor(system, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(f"kernel system is singular or indefinite: {exc}")
    return scipy.linalg.cho_solve(factor, Y)


def krr_predict(k_cross, coeffs) -> np.ndarray:
    """Predictions k(x, X)^T (K + lam2 I)^{-1} Y for rows of cross-kernel."""
    k_cross = np.asarray(k_cross, dtype=np.float64)
    coeffs = np.asarray(coeffs, dtype=np.float64)
    return k_cross @ coeffs
