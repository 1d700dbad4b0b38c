"""Dense linear-algebra and scalar kernels used by the linear policies.

All functions are pure and operate in float64.
"""

import numpy as np
from scipy import linalg
from scipy.special import expit

from .exceptions import InvalidArgumentError, NumericalError


def _as_vector(x, name="x"):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise InvalidArgumentError(f"{name} must be 1-D, got shape {x.shape}")
    return x


def _as_square(A, name="A"):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidArgumentError(f"{name} must be a square matrix, got shape {A.shape}")
    return A


def gram_identity(dim):
    """Return the d x d identity used to initialise a regularised Gram matrix."""
    if int(dim) != dim or dim < 1:
        raise InvalidArgumentError(f"dim must be a positive integer, got {dim!r}")
    return np.eye(int(dim))


def rank_one_update(A, x):
    """Return ``A + x x^T`` as a new array."""
    A = _as_square(A)
    x = _as_vector(x)
    if A.shape[0] != x.shape[0]:
        raise InvalidArgumentError(
            f"dimension mismatch: A is {A.shape[0]}x{A.shape[0]}, x has length {x.shape[0]}"
        )
    return A + np.outer(x, x)


def sherman_morrison_update(A_inv, x):
    """Inverse of ``A + x x^T`` given ``A_inv = A^{-1}`` (A symmetric)."""
    A_inv = _as_square(A_inv, "A_inv")
    x = _as_vector(x)
    if A_inv.shape[0] != x.shape[0]:
        raise InvalidArgumentError("dimension mismatch between A_inv and x")
    u = A_inv @ x
    denom = 1.0 + x @ u
    if not np.isfinite(denom) or denom <= 0.0:
        raise NumericalError(f"Sherman-Morrison denominator is {denom}")
    return A_inv - np.outer(u, u) / denom


def solve(A, b):
    """Solve ``A theta = b`` for symmetric positive definite ``A``.

    Uses a Cholesky factorisation; raises :class:`NumericalError` when the
    inputs are not finite or ``A`` is not positive definite to working
    precision.
    """
    A = _as_square(A)
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != A.shape[0]:
        raise InvalidArgumentError("dimension mismatch between A and b")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise NumericalError("solve received non-finite input")
    try:
        factor = linalg.cho_factor(A, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"matrix is not positive definite: {exc}") from exc
    theta = linalg.cho_solve(factor, b, check_finite=False)
    if not np.all(np.isfinite(theta)):
        raise NumericalError("solve produced non-finite output")
    return theta


def solve_stacked(A, B):
    """Solve a stack of systems ``A[i] X[i] = B[i]``.

    ``A`` has shape (k, d, d); ``B`` has shape (k, d) or (k, d, m).
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    vector_rhs = B.ndim == A.ndim - 1
    try:
        X = np.linalg.solve(A, B[..., None] if vector_rhs else B)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular system: {exc}") from exc
    if not np.all(np.isfinite(X)):
        raise NumericalError("stacked solve produced non-finite output")
    return X[..., 0] if vector_rhs else X


def cholesky_stacked(A):
    """Lower Cholesky factors of a stack of SPD matrices."""
    try:
        return np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"matrix is not positive definite: {exc}") from exc


def softmax(logits, axis=-1):
    """Numerically stable softmax (max-subtracted) along ``axis``."""
    z = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise NumericalError("softmax received non-finite logits")
    z = z - np.max(z, axis=axis, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=axis, keepdims=True)


def sigmoid(z):
    """Logistic function; overflow-safe for large ``|z|``."""
    return expit(z)
