import numpy as np

from ..exceptions import InvalidArgumentError
from ..numerics import cholesky_stacked, sherman_morrison_update, solve_stacked
from ..validation import check_positive, check_positive_int
from .base import BaseLinearPolicy

B_FLOOR = 1e-10


class LinTS(BaseLinearPolicy):
    """Linear Thompson sampling with a normal-inverse-gamma posterior per arm.

    For arm ``a`` with design ``X`` and rewards ``r`` the posterior is

        precision = lam * I + X^T X
        mu        = precision^{-1} X^T r
        a_t       = a0 + m / 2
        b_t       = b0 + (r^T r - mu^T precision mu) / 2

    and each decision draws ``sigma2 ~ InvGamma(a_t, b_t)`` and
    ``theta ~ N(mu, sigma2 * precision^{-1})`` before taking the argmax.

    Parameters
    ----------
    lam : float, default=0.25
        Prior precision scale.
    a0, b0 : float, default=6.0
        Inverse-gamma prior on the noise variance.
    batch_size : int, default=20
    immediate : bool, default=False
    inverse : {"solve", "sherman-morrison"}, default="solve"
        ``"solve"`` factorises the precision at every decision and draws
        through a triangular solve; ``"sherman-morrison"`` maintains the
        covariance with rank-one updates and factorises that instead.
    random_state : int, Generator or None
    """

    def __init__(self, lam=0.25, a0=6.0, b0=6.0, batch_size=20, immediate=False,
                 inverse="solve", random_state=None):
        self.lam = lam
        self.a0 = a0
        self.b0 = b0
        self.batch_size = batch_size
        self.immediate = immediate
        self.inverse = inverse
        self.random_state = random_state

    def _init_state(self):
        check_positive(self.lam, "lam")
        check_positive(self.a0, "a0")
        check_positive(self.b0, "b0")
        check_positive_int(self.batch_size, "batch_size")
        if self.inverse not in ("solve", "sherman-morrison"):
            raise InvalidArgumentError(f"unknown inverse mode {self.inverse!r}")
        k, d = self.n_arms_, self.n_features_in_
        self.precision_ = np.tile(self.lam * np.eye(d), (k, 1, 1))
        self.xty_ = np.zeros((k, d))
        self.yty_ = np.zeros(k)
        self.n_obs_ = np.zeros(k, dtype=np.int64)
        if self.inverse == "sherman-morrison":
            self.cov_ = np.tile(np.eye(d) / self.lam, (k, 1, 1))

    @property
    def mean_(self):
        """Posterior mean of every arm's parameters (k, d)."""
        if self.inverse == "sherman-morrison":
            return np.einsum("kij,kj->ki", self.cov_, self.xty_)
        return solve_stacked(self.precision_, self.xty_)

    def posterior(self):
        """Return ``(mu, a_t, b_t)``; ``b_t`` is floored at a tiny positive value."""
        mu = self._current_estimate()
        a_t = self.a0 + self.n_obs_ / 2.0
        # mu^T precision mu == mu^T X^T r
        b_t = self.b0 + (self.yty_ - np.einsum("kd,kd->k", mu, self.xty_)) / 2.0
        return mu, a_t, np.maximum(b_t, B_FLOOR)

    def _correlate(self, z):
        """Map standard normals to draws with covariance ``precision^{-1}``."""
        if self.inverse == "sherman-morrison":
            return np.einsum("kij,kj->ki", cholesky_stacked(self.cov_), z)
        chol = cholesky_stacked(self.precision_)
        # chol^{-T} z has covariance precision^{-1}
        return solve_stacked(np.swapaxes(chol, 1, 2), z)

    def sample_parameters(self):
        """One posterior draw of every arm's parameter vector."""
        mu, a_t, b_t = self.posterior()
        sigma2 = b_t / self.rng_.gamma(a_t)
        z = self.rng_.standard_normal(mu.shape)
        return mu + np.sqrt(sigma2)[:, None] * self._correlate(z)

    def _estimate(self):
        return self.mean_

    def _policy_values(self, contexts):
        return np.einsum("kd,kd->k", self.sample_parameters(), contexts)

    def _select(self, contexts):
        return int(np.argmax(self._policy_values(contexts)))

    def _apply_batch(self, X, arms, rewards):
        for x, a, r in zip(X, arms, rewards):
            self.precision_[a] += np.outer(x, x)
            self.xty_[a] += r * x
            self.yty_[a] += r * r
            self.n_obs_[a] += 1
            if self.inverse == "sherman-morrison":
                self.cov_[a] = sherman_morrison_update(self.cov_[a], x)
