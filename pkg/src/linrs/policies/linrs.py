"""Linear risk-sensitive satisficing (LinRS)."""

from collections import deque

import numpy as np

from ..exceptions import InvalidArgumentError
from ..numerics import sherman_morrison_update, softmax, solve_stacked
from ..validation import check_positive, check_positive_int
from .base import BaseLinearPolicy


def linrs_values(theta, phi, contexts, aleph):
    """Satisficing value of every arm.

    The reliability of arm ``a`` is the ``a``-th component of the softmax
    over the per-arm logits ``phi[a] @ contexts[a]``; it scales the gap
    between the estimated action value ``theta[a] @ contexts[a]`` and the
    aspiration level.
    """
    reliability = softmax(np.einsum("kd,kd->k", phi, contexts))
    return reliability * (np.einsum("kd,kd->k", theta, contexts) - aleph)


def reliability_targets(arm, rho, w):
    """Target class distribution ``(w * onehot(arm) + rho) / (w + 1)``."""
    u = np.zeros_like(rho, dtype=np.float64)
    u[arm] = 1.0
    return (w * u + rho) / (w + 1.0)


def reliability_probs(phi, contexts):
    """Softmax reliability for a batch of context matrices (n, k, d) -> (n, k)."""
    return softmax(np.einsum("nkd,kd->nk", contexts, phi), axis=1)


def cross_entropy_loss(phi, contexts, targets):
    """Mean cross-entropy between ``targets`` (n, k) and the softmax reliability."""
    logits = np.einsum("nkd,kd->nk", contexts, phi)
    m = logits.max(axis=1, keepdims=True)
    log_probs = logits - m - np.log(np.exp(logits - m).sum(axis=1, keepdims=True))
    return float(-np.mean(np.sum(targets * log_probs, axis=1)))


def reliability_gradient(phi, contexts, targets):
    """Exact gradient of :func:`cross_entropy_loss` with respect to ``phi``."""
    probs = reliability_probs(phi, contexts)
    coef = probs * targets.sum(axis=1, keepdims=True) - targets
    return np.einsum("nk,nkd->kd", coef, contexts) / contexts.shape[0]


def reliability_step(phi, contexts, targets, eta):
    """One mini-batch update ``phi_a += eta * mean((y_a - n_a) x_a)``."""
    probs = reliability_probs(phi, contexts)
    return phi + eta * np.einsum("nk,nkd->kd", targets - probs, contexts) / contexts.shape[0]


class LinRS(BaseLinearPolicy):
    """Satisficing contextual bandit with linear value and reliability models.

    Each arm keeps a ridge estimate of its action value (``A = I + sum x x^T``,
    ``b = sum r x``) and a row of a multiclass logistic model that estimates
    how often the arm is chosen. The arm maximising
    ``reliability * (value - aleph)`` is pulled: when some arm is estimated
    above the aspiration level the rule exploits reliable arms, otherwise
    it favours rarely chosen ones.

    Parameters
    ----------
    aleph : float, default=0.5
        Aspiration level.
    w : float, default=0.1
        Weight of the current choice in the reliability target.
    eta : float, default=0.1
        Learning rate of the reliability model.
    batch_size : int, default=20
        Observations are applied every ``batch_size`` rounds; also the
        mini-batch size of the reliability updates.
    epochs : int, default=5
        Passes over the experience queue per reliability update.
    queue_size : int, default=100
        Capacity of the experience queue.
    immediate : bool, default=False
        Apply every observation as soon as it arrives.
    inverse : {"solve", "sherman-morrison"}, default="solve"
        ``"solve"`` refactorises ``A`` at every decision; ``"sherman-morrison"``
        maintains ``A^{-1}`` with rank-one updates.
    random_state : int, Generator or None
        Seed for the queue shuffling.
    """

    def __init__(self, aleph=0.5, w=0.1, eta=0.1, batch_size=20, epochs=5,
                 queue_size=100, immediate=False, inverse="solve", random_state=None):
        self.aleph = aleph
        self.w = w
        self.eta = eta
        self.batch_size = batch_size
        self.epochs = epochs
        self.queue_size = queue_size
        self.immediate = immediate
        self.inverse = inverse
        self.random_state = random_state

    def _init_state(self):
        check_positive(self.w, "w")
        check_positive(self.eta, "eta")
        if not np.isfinite(self.aleph):
            raise InvalidArgumentError(f"aleph must be finite, got {self.aleph!r}")
        for name in ("batch_size", "epochs", "queue_size"):
            check_positive_int(getattr(self, name), name)
        if self.inverse not in ("solve", "sherman-morrison"):
            raise InvalidArgumentError(f"unknown inverse mode {self.inverse!r}")
        k, d = self.n_arms_, self.n_features_in_
        self.A_ = np.tile(np.eye(d), (k, 1, 1))
        self.b_ = np.zeros((k, d))
        self.phi_ = np.zeros((k, d))
        self.queue_ = deque(maxlen=self.queue_size)
        if self.inverse == "sherman-morrison":
            self.A_inv_ = self.A_.copy()

    @property
    def theta_(self):
        """Ridge estimate of every arm's action-value parameters (k, d)."""
        if self.inverse == "sherman-morrison":
            return np.einsum("kij,kj->ki", self.A_inv_, self.b_)
        return solve_stacked(self.A_, self.b_)

    def _estimate(self):
        return self.theta_

    def _policy_values(self, contexts):
        return linrs_values(self._current_estimate(), self.phi_, contexts, self.aleph)

    def _select(self, contexts):
        return int(np.argmax(self._policy_values(contexts)))

    def _after_observe(self, contexts, arm):
        # baseline is the selection ratio at record time, so the target is fixed too
        rho = self.counts_ / self.t_
        self.queue_.append((contexts.copy(), arm, rho, reliability_targets(arm, rho, self.w)))

    def _apply_batch(self, X, arms, rewards):
        for x, a, r in zip(X, arms, rewards):
            self.A_[a] += np.outer(x, x)
            self.b_[a] += r * x
            if self.inverse == "sherman-morrison":
                self.A_inv_[a] = sherman_morrison_update(self.A_inv_[a], x)
        self._update_reliability()

    def _update_reliability(self):
        contexts = np.array([e[0] for e in self.queue_])
        targets = np.array([e[3] for e in self.queue_])
        for _ in range(self.epochs):
            order = self.rng_.permutation(len(contexts))
            for start in range(0, len(order), self.batch_size):
                idx = order[start:start + self.batch_size]
                self.phi_ = reliability_step(self.phi_, contexts[idx], targets[idx], self.eta)
