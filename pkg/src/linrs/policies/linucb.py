import numpy as np

from ..exceptions import InvalidArgumentError
from ..numerics import sherman_morrison_update, solve_stacked
from ..validation import check_positive, check_positive_int
from .base import BaseLinearPolicy


class LinUCB(BaseLinearPolicy):
    """LinUCB with disjoint per-arm ridge models.

    Pulls ``argmax_a theta_a @ x_a + alpha * sqrt(x_a @ A_a^{-1} @ x_a)``.

    Parameters
    ----------
    alpha : float, default=0.1
        Width of the confidence bonus.
    batch_size : int, default=20
    immediate : bool, default=False
    inverse : {"solve", "sherman-morrison"}, default="solve"
    """

    def __init__(self, alpha=0.1, batch_size=20, immediate=False, inverse="solve"):
        self.alpha = alpha
        self.batch_size = batch_size
        self.immediate = immediate
        self.inverse = inverse

    def _init_state(self):
        check_positive(self.alpha, "alpha", strict=False)
        check_positive_int(self.batch_size, "batch_size")
        if self.inverse not in ("solve", "sherman-morrison"):
            raise InvalidArgumentError(f"unknown inverse mode {self.inverse!r}")
        k, d = self.n_arms_, self.n_features_in_
        self.A_ = np.tile(np.eye(d), (k, 1, 1))
        self.b_ = np.zeros((k, d))
        if self.inverse == "sherman-morrison":
            self.A_inv_ = self.A_.copy()

    @property
    def theta_(self):
        if self.inverse == "sherman-morrison":
            return np.einsum("kij,kj->ki", self.A_inv_, self.b_)
        return solve_stacked(self.A_, self.b_)

    def _solve_with_contexts(self, contexts):
        """Return ``(theta, A^{-1} x)`` for every arm."""
        if self.inverse == "sherman-morrison":
            return (np.einsum("kij,kj->ki", self.A_inv_, self.b_),
                    np.einsum("kij,kj->ki", self.A_inv_, contexts))
        sol = solve_stacked(self.A_, np.stack([self.b_, contexts], axis=-1))
        return sol[..., 0], sol[..., 1]

    def confidence_bonus(self, contexts):
        """``alpha * sqrt(x_a @ A_a^{-1} @ x_a)`` for every arm."""
        _, z = self._solve_with_contexts(contexts)
        return self.alpha * np.sqrt(np.einsum("kd,kd->k", contexts, z))

    def _estimate(self):
        return self.theta_

    def _policy_values(self, contexts):
        theta, z = self._solve_with_contexts(contexts)
        quad = np.maximum(np.einsum("kd,kd->k", contexts, z), 0.0)
        return np.einsum("kd,kd->k", theta, contexts) + self.alpha * np.sqrt(quad)

    def _select(self, contexts):
        return int(np.argmax(self._policy_values(contexts)))

    def _apply_batch(self, X, arms, rewards):
        for x, a, r in zip(X, arms, rewards):
            self.A_[a] += np.outer(x, x)
            self.b_[a] += r * x
            if self.inverse == "sherman-morrison":
                self.A_inv_[a] = sherman_morrison_update(self.A_inv_[a], x)
