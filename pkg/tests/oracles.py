"""Reference computations written independently of the package code."""

import mpmath
import numpy as np

mpmath.mp.dps = 50


def dense_gram(X):
    """I + sum of outer products, accumulated one entry at a time."""
    X = np.asarray(X, dtype=float)
    d = X.shape[1]
    G = [[1.0 if i == j else 0.0 for j in range(d)] for i in range(d)]
    for row in X:
        for i in range(d):
            for j in range(d):
                G[i][j] += row[i] * row[j]
    return np.array(G)


def ridge_lstsq(X, r, lam=1.0):
    """Ridge solution via least squares on the augmented system [X; sqrt(lam) I]."""
    X = np.asarray(X, dtype=float).reshape(-1, np.shape(X)[-1])
    d = X.shape[1]
    Xa = np.vstack([X, np.sqrt(lam) * np.eye(d)])
    ra = np.concatenate([np.asarray(r, dtype=float), np.zeros(d)])
    return np.linalg.lstsq(Xa, ra, rcond=None)[0]


def gauss_solve(A, b):
    """Gaussian elimination with partial pivoting in plain Python floats."""
    n = len(b)
    M = [list(map(float, A[i])) + [float(b[i])] for i in range(n)]
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(M[i][c]))
        M[c], M[p] = M[p], M[c]
        for i in range(c + 1, n):
            f = M[i][c] / M[c][c]
            for j in range(c, n + 1):
                M[i][j] -= f * M[c][j]
    x = [0.0] * n
    for i in reversed(range(n)):
        x[i] = (M[i][n] - sum(M[i][j] * x[j] for j in range(i + 1, n))) / M[i][i]
    return np.array(x)


def mp_softmax(logits):
    e = [mpmath.exp(mpmath.mpf(float(v))) for v in logits]
    s = mpmath.fsum(e)
    return [v / s for v in e]


def mp_sigmoid(z):
    return 1 / (1 + mpmath.exp(-mpmath.mpf(float(z))))


def mp_linrs_values(theta, phi, contexts, aleph):
    logits = [mpmath.fsum(mpmath.mpf(float(p)) * mpmath.mpf(float(x)) for p, x in zip(pa, xa))
              for pa, xa in zip(phi, contexts)]
    probs = _mp_softmax_mp(logits)
    out = []
    for a in range(len(contexts)):
        value = mpmath.fsum(mpmath.mpf(float(t)) * mpmath.mpf(float(x))
                            for t, x in zip(theta[a], contexts[a]))
        out.append(probs[a] * (value - mpmath.mpf(float(aleph))))
    return out


def _mp_softmax_mp(logits):
    e = [mpmath.exp(v) for v in logits]
    s = mpmath.fsum(e)
    return [v / s for v in e]


def cross_entropy(phi, contexts, targets):
    """Mean over rounds of -sum_a y_a log softmax_a, via scipy-free log-sum-exp."""
    total = 0.0
    for X, y in zip(contexts, targets):
        logits = np.array([p @ x for p, x in zip(phi, X)])
        m = logits.max()
        lse = m + np.log(np.sum(np.exp(logits - m)))
        total -= np.sum(y * (logits - lse))
    return total / len(contexts)


def central_difference(f, x, h=1e-5):
    g = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        xp, xm = x.copy(), x.copy()
        xp[idx] += h
        xm[idx] -= h
        g[idx] = (f(xp) - f(xm)) / (2 * h)
    return g


def naive_filtered_rows(params, noise_var, aleph_opt, n_candidates, rng):
    """Plain reject-and-retry: uniform contexts, Gaussian noise, keep passing rows."""
    k, d = params.shape
    x = rng.random((n_candidates, k, d))
    eps = rng.normal(0.0, np.sqrt(noise_var), n_candidates)
    logits = np.einsum("nkd,kd->nk", x, params) + eps[:, None]
    p = 1.0 / (1.0 + np.exp(-logits))
    s = np.sort(p, axis=1)
    keep = (s[:, -1] > aleph_opt) & (s[:, -2] < aleph_opt)
    return x[keep], p[keep]


class ScriptedEnvironment:
    """Deterministic environment cycling through fixed rounds."""

    default_aleph = 0.5
    default_w = 0.1
    default_eta = 0.1
    default_horizon = 10

    def __init__(self, contexts, means):
        from linrs.core import EnvironmentRound
        self._round = EnvironmentRound
        self.contexts = np.asarray(contexts, dtype=float)
        self.means = np.asarray(means, dtype=float)
        self.n_arms = self.contexts.shape[1]

    def reset(self, rng):
        return self

    def round(self, t, rng):
        i = t % len(self.means)
        means = self.means[i]
        return self._round(self.contexts[i], means, lambda arm: float(means[arm]))


def hand_trace_linucb(contexts, means, horizon, n_forced, alpha):
    """Step-by-step LinUCB with immediate updates and explicit inverses."""
    k, d = contexts.shape[1], contexts.shape[2]
    A = [np.eye(d) for _ in range(k)]
    b = [np.zeros(d) for _ in range(k)]
    trace = []
    for t in range(horizon):
        X, mu = contexts[t % len(means)], means[t % len(means)]
        theta = [np.linalg.inv(A[a]) @ b[a] for a in range(k)]
        greedy = int(np.argmax([theta[a] @ X[a] for a in range(k)]))
        if t < n_forced:
            arm = t % k
        else:
            ucb = [theta[a] @ X[a] + alpha * np.sqrt(X[a] @ np.linalg.inv(A[a]) @ X[a])
                   for a in range(k)]
            arm = int(np.argmax(ucb))
        r = mu[arm]
        A[arm] = A[arm] + np.outer(X[arm], X[arm])
        b[arm] = b[arm] + r * X[arm]
        trace.append((t + 1, arm, r, mu.max() - mu[arm], int(arm == greedy)))
    return trace
