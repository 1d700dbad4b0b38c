import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..exceptions import InvalidArgumentError
from ..validation import check_arm, check_context_batch, check_contexts


class BaseLinearPolicy(BaseEstimator):
    """Common plumbing for disjoint per-arm linear contextual policies.

    Subclasses implement ``_init_state``, ``_estimate``, ``_select``
    and ``_apply_batch``. Observations are buffered and folded into the
    sufficient statistics every ``batch_size`` rounds.

    State is created lazily from the first context matrix seen, in the way
    scikit-learn estimators learn ``n_features_in_`` on their first fit.
    Fitted attributes carry a trailing underscore.
    """

    def reset(self, seed=None):
        """Discard all learned state and reseed the internal generator."""
        for attr in [a for a in vars(self) if a.endswith("_") and not a.startswith("__")]:
            delattr(self, attr)
        self._seed = getattr(self, "random_state", None) if seed is None else seed
        return self

    def _ensure_state(self, contexts, check_input):
        if check_input:
            contexts = check_contexts(
                contexts,
                getattr(self, "n_arms_", None),
                getattr(self, "n_features_in_", None),
            )
        if not hasattr(self, "n_arms_"):
            self.n_arms_, self.n_features_in_ = contexts.shape
            self.rng_ = np.random.default_rng(getattr(self, "_seed", getattr(self, "random_state", None)))
            self.t_ = 0
            self.counts_ = np.zeros(self.n_arms_, dtype=np.int64)
            self.pending_ = []
            self.version_ = 0
            self._init_state()
        return contexts

    # PolicyContract -------------------------------------------------------

    def select(self, contexts, *, check_input=True):
        """Arm chosen by the policy for this round (ties to the lowest index)."""
        contexts = self._ensure_state(contexts, check_input)
        return self._select(contexts)

    def greedy_arm(self, contexts, *, check_input=True):
        """Arm maximising the estimated action value for this round."""
        contexts = self._ensure_state(contexts, check_input)
        return int(np.argmax(self._action_values(contexts)))

    def _current_estimate(self):
        # the estimate only moves on flush, so it is memoised per state version
        cache = getattr(self, "estimate_cache_", None)
        if cache is None or cache[0] != self.version_:
            cache = self.estimate_cache_ = (self.version_, self._estimate())
        return cache[1]

    def _action_values(self, contexts):
        return np.einsum("kd,kd->k", self._current_estimate(), contexts)

    def action_values(self, contexts, *, check_input=True):
        """Estimated expected reward of every arm in this round."""
        contexts = self._ensure_state(contexts, check_input)
        return self._action_values(contexts)

    def observe(self, contexts, arm, reward, *, check_input=True):
        """Record the reward of the pulled arm."""
        contexts = self._ensure_state(contexts, check_input)
        if check_input:
            arm = check_arm(arm, self.n_arms_)
            reward = float(reward)
        self.t_ += 1
        self.counts_[arm] += 1
        self.pending_.append((contexts[arm].copy(), arm, reward))
        self._after_observe(contexts, arm)
        if self.immediate or len(self.pending_) >= self.batch_size:
            self.flush()
        return self

    def flush(self):
        """Fold buffered observations into the sufficient statistics now."""
        if getattr(self, "pending_", None):
            X = np.array([p[0] for p in self.pending_])
            arms = np.array([p[1] for p in self.pending_])
            rewards = np.array([p[2] for p in self.pending_])
            self.pending_ = []
            self._apply_batch(X, arms, rewards)
            self.version_ += 1
        return self

    def _after_observe(self, contexts, arm):
        pass

    # scikit-learn surface -----------------------------------------------

    def partial_fit(self, contexts, arms, rewards):
        """Observe a sequence of rounds.

        ``contexts`` has shape (n_rounds, n_arms, n_features); ``arms`` and
        ``rewards`` have length n_rounds.
        """
        X = check_context_batch(contexts)
        arms = np.asarray(arms).ravel()
        rewards = np.asarray(rewards, dtype=np.float64).ravel()
        if not (X.shape[0] == arms.shape[0] == rewards.shape[0]):
            raise InvalidArgumentError("contexts, arms and rewards must have the same number of rounds")
        for ctx, arm, r in zip(X, arms, rewards):
            self.observe(ctx, int(arm), r)
        return self

    def fit(self, contexts, arms, rewards):
        """Reset, then observe the given rounds and flush the buffer."""
        return self.reset().partial_fit(contexts, arms, rewards).flush()

    def predict(self, contexts):
        """Greedy arm for each round of a (n_rounds, n_arms, n_features) batch."""
        check_is_fitted(self, "n_arms_")
        X = check_context_batch(contexts)
        return np.array([self.greedy_arm(ctx) for ctx in X], dtype=np.int64)

    def decision_function(self, contexts):
        """Policy value of every arm for each round of a batch."""
        check_is_fitted(self, "n_arms_")
        X = check_context_batch(contexts)
        return np.array([self._policy_values(self._ensure_state(ctx, True)) for ctx in X])

    def _policy_values(self, contexts):
        raise NotImplementedError
