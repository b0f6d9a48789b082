"""Input validation helpers shared by the estimators."""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class DimensionMismatchError(ValueError):
    pass


class NotFittedError(RuntimeError):
    pass


def as_float_matrix(X):
    """Coerce to a 2-D float64 matrix, preserving sparsity."""
    if sp.issparse(X):
        return X.tocsr().astype(np.float64)
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"expected 2-D input, got shape {X.shape}")
    return X


def check_feature_dim(X, expected: int) -> None:
    if X.shape[1] != expected:
        raise DimensionMismatchError(
            f"feature dimension {X.shape[1]} does not match expected {expected}")


def check_consistent_length(X, y) -> None:
    if X.shape[0] != len(y):
        raise ValueError(f"{X.shape[0]} rows but {len(y)} labels")


def check_is_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} must be fitted before use")
