"""Input validation helpers in the style of ``sklearn.utils.validation``."""

import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InvalidArgumentError


def check_contexts(contexts, n_arms=None, n_features=None):
    """Validate a per-round context matrix of shape (n_arms, n_features).

    Returns a C-contiguous float64 copy-free view when possible.
    """
    try:
        X = check_array(contexts, dtype=np.float64, ensure_2d=True)
    except ValueError as exc:
        raise InvalidArgumentError(f"invalid context matrix: {exc}") from exc
    if n_arms is not None and X.shape[0] != n_arms:
        raise InvalidArgumentError(f"expected {n_arms} arms, got {X.shape[0]}")
    if n_features is not None and X.shape[1] != n_features:
        raise InvalidArgumentError(f"expected {n_features} features, got {X.shape[1]}")
    return X


def check_context_batch(contexts):
    """Validate a stack of context matrices of shape (n_rounds, n_arms, n_features)."""
    try:
        X = check_array(contexts, dtype=np.float64, allow_nd=True, ensure_2d=False)
    except ValueError as exc:
        raise InvalidArgumentError(f"invalid context batch: {exc}") from exc
    if X.ndim == 2:
        X = X[None]
    if X.ndim != 3:
        raise InvalidArgumentError(f"context batch must be 3-D, got shape {X.shape}")
    return X


def check_arm(arm, n_arms):
    if not isinstance(arm, numbers.Integral) or not 0 <= arm < n_arms:
        raise InvalidArgumentError(f"arm must be an integer in [0, {n_arms}), got {arm!r}")
    return int(arm)


def check_positive(value, name, *, strict=True):
    if not isinstance(value, numbers.Real) or not np.isfinite(value):
        raise InvalidArgumentError(f"{name} must be a finite real number, got {value!r}")
    if value < 0 or (strict and value == 0):
        raise InvalidArgumentError(f"{name} must be {'positive' if strict else 'non-negative'}, got {value}")
    return value


def check_positive_int(value, name):
    if not isinstance(value, numbers.Integral) or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
