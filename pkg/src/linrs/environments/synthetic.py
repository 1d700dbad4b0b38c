"""Linear-sigmoid synthetic environment with a constant optimal aspiration level.

Rows are drawn from the distribution of ``(x, eps)`` conditioned on the best
arm's mean lying above ``aleph_opt`` and the runner-up's below it, i.e. the
rows a plain reject-and-retry loop over uniform contexts and Gaussian noise
would keep. Sampling is exact but avoids that loop: contexts come from an
exponentially tilted proposal and are accepted by rejection against a
provable envelope, then ``eps`` is drawn from the normal truncated to the
interval that makes the row pass.
"""

import io
import json
import logging
import struct
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import log_ndtr, logit, ndtr
from scipy.stats import truncnorm

from ..core import EnvironmentRound
from ..exceptions import DataError, InfeasibleFilterError, InvalidArgumentError
from ..numerics import sigmoid

logger = logging.getLogger(__name__)

MAGIC = b"LINRSDS1"


@dataclass(frozen=True)
class SyntheticSpec:
    n_features: int = 128
    n_arms: int = 8
    param_scale: float = 0.01
    noise_var: float = 0.1
    aleph_opt: float = 0.5
    n_rows: int = 50_000
    seed: int = 0

    def __post_init__(self):
        if self.n_features < 1 or self.n_arms < 2 or self.n_rows < 0:
            raise InvalidArgumentError(
                "n_features must be >= 1, n_arms >= 2 and n_rows >= 0")
        if not (self.param_scale > 0 and self.noise_var > 0):
            raise InvalidArgumentError("param_scale and noise_var must be positive")
        if not 0.0 < self.aleph_opt < 1.0:
            raise InvalidArgumentError(f"aleph_opt must lie in (0, 1), got {self.aleph_opt}")


@dataclass
class FilteredDataset:
    spec: SyntheticSpec
    contexts: np.ndarray    # (n, k, d)
    means: np.ndarray       # (n, k)
    params: np.ndarray      # (k, d)
    acceptance_rate: float = float("nan")
    n_candidates: int = 0
    param_draws: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def aleph_opt(self):
        return self.spec.aleph_opt

    def __len__(self):
        return self.contexts.shape[0]


def sample_parameters(spec, rng):
    """One d-dimensional Gaussian parameter vector per arm, variance ``param_scale``."""
    return rng.normal(0.0, np.sqrt(spec.param_scale), size=(spec.n_arms, spec.n_features))


def true_means(contexts, params, noise):
    """``sigmoid(x_a @ theta_a + noise)`` with the noise shared by all arms of a round."""
    contexts = np.asarray(contexts, dtype=np.float64)
    params = np.asarray(params, dtype=np.float64)
    if contexts.shape[-2:] != params.shape:
        raise InvalidArgumentError(
            f"contexts {contexts.shape} and params {params.shape} disagree")
    logits = np.einsum("...kd,kd->...k", contexts, params)
    return sigmoid(logits + np.asarray(noise, dtype=np.float64)[..., None])


def passes_filter(means, aleph_opt):
    """Strict bracket ``p_first > aleph_opt > p_second`` per row."""
    top2 = np.sort(np.asarray(means), axis=-1)[..., -2:]
    return (top2[..., 1] > aleph_opt) & (top2[..., 0] < aleph_opt)


def _log_tilt_norm(u):
    """``log(u / expm1(u))``: log normaliser of the density ``exp(u x)`` on [0, 1]."""
    u = np.asarray(u, dtype=np.float64)
    small = np.abs(u) < 1e-8
    safe = np.where(small, 1.0, u)
    return np.where(small, -u / 2.0, np.log(safe / np.expm1(safe)))


def _sample_tilted(u, v):
    """Inverse-CDF draw from the density proportional to ``exp(u x)`` on [0, 1]."""
    small = np.abs(u) < 1e-8
    safe = np.where(small, 1.0, u)
    return np.where(small, v, np.log1p(v * np.expm1(safe)) / safe)


class _TiltedProposal:
    """Mixture over arms; component ``a`` tilts arm ``a``'s coordinates by ``exp(tau * theta_a . x_a)``.

    ``exp(log_bound)`` is a constant with ``P(accept | x) * f(x) / q(x) <= bound`` for
    every ``x`` in the unit cube, so accepting a proposal with probability
    ``P(accept | x) * f(x) / (bound * q(x))`` gives exact conditional draws.
    """

    def __init__(self, params, level, noise_sd, tau):
        self.params = params
        self.level = level
        self.noise_sd = noise_sd
        self.tau = tau
        k = params.shape[0]
        self.log_c = _log_tilt_norm(tau * params).sum(axis=1)
        z_lo = np.clip(params, None, 0.0).sum(axis=1)
        z_hi = np.clip(params, 0.0, None).sum(axis=1)
        # log of sup_z Phi((z - level)/sd) * exp(-tau z) / C_a; log-concave in z
        log_m = np.empty(k)
        for a in range(k):
            def neg(z):
                return -(log_ndtr((z - level) / noise_sd) - tau * z)
            res = minimize_scalar(neg, bounds=(z_lo[a], z_hi[a]), method="bounded",
                                  options={"xatol": 1e-10})
            best = min(res.fun, neg(z_lo[a]), neg(z_hi[a]))
            log_m[a] = -best - self.log_c[a]
        top = log_m.max()
        self.weights = np.exp(log_m - top)
        self.weights /= self.weights.sum()
        self.log_bound = top + np.log(np.exp(log_m - top).sum()) + 1e-6

    def sample(self, rng, size):
        k, d = self.params.shape
        comp = rng.choice(k, size=size, p=self.weights)
        x = rng.random((size, k, d))
        rows = np.arange(size)
        x[rows, comp] = _sample_tilted(self.tau * self.params[comp], x[rows, comp])
        return x

    def log_density_ratio(self, z):
        """``log f(x) - log q(x)`` given the per-arm logits ``z`` (n, k)."""
        log_q = np.log(self.weights) + self.log_c + self.tau * z
        m = log_q.max(axis=1, keepdims=True)
        return -(m[:, 0] + np.log(np.exp(log_q - m).sum(axis=1)))


def _choose_proposal(params, level, noise_sd, taus=np.arange(0.0, 60.5, 1.0)):
    proposals = [_TiltedProposal(params, level, noise_sd, tau) for tau in taus]
    return min(proposals, key=lambda p: p.log_bound)


def build_filtered_dataset(spec, rng=None, *, chunk_size=4096, probe_size=100_000,
                           min_acceptance=1e-6, max_param_draws=10,
                           max_candidates=50_000_000):
    """Generate ``spec.n_rows`` rows that satisfy the constant-aspiration filter.

    One parameter set is kept for the whole dataset. It is redrawn only when
    the acceptance rate estimated on the first ``probe_size`` candidates
    falls below ``min_acceptance``. ``acceptance_rate`` on the result is the
    estimated fraction of plain uniform candidates that would pass.
    """
    rng = np.random.default_rng(spec.seed if rng is None else rng)
    k, d, n = spec.n_arms, spec.n_features, spec.n_rows
    noise_sd = np.sqrt(spec.noise_var)
    level = logit(spec.aleph_opt)

    for draw in range(1, max_param_draws + 1):
        params = sample_parameters(spec, rng)
        proposal = _choose_proposal(params, level, noise_sd)
        rows_x, rows_eps = [], []
        n_rows = n_candidates = 0
        mass = 0.0
        infeasible = False
        while n_rows < n or n_candidates < probe_size:
            x = proposal.sample(rng, chunk_size)
            z = np.einsum("nkd,kd->nk", x, params)
            top2 = np.sort(z, axis=1)[:, -2:]
            lo = (level - top2[:, 1]) / noise_sd
            hi = (level - top2[:, 0]) / noise_sd
            p_accept = ndtr(hi) - ndtr(lo)
            log_w = proposal.log_density_ratio(z)
            n_candidates += chunk_size
            mass += np.sum(p_accept * np.exp(log_w))
            with np.errstate(divide="ignore"):
                log_ratio = np.log(p_accept) + log_w - proposal.log_bound
            if np.any(log_ratio > 1e-9):
                raise RuntimeError("proposal envelope violated; the bound is not valid")
            keep = np.log(rng.random(chunk_size)) < log_ratio
            if keep.any():
                eps = noise_sd * truncnorm.rvs(lo[keep], hi[keep], random_state=rng)
                rows_x.append(x[keep])
                rows_eps.append(eps)
                n_rows += int(keep.sum())
            if (n_candidates >= probe_size and n_candidates - chunk_size < probe_size
                    and mass / n_candidates < min_acceptance):
                infeasible = True
                break
            if n_candidates >= max_candidates:
                raise InfeasibleFilterError(
                    f"only {n_rows}/{n} rows after {n_candidates} candidates "
                    f"(sigma={spec.param_scale}, aleph_opt={spec.aleph_opt})")
        rate = mass / n_candidates if n_candidates else float("nan")
        if infeasible:
            logger.info("parameter draw %d infeasible (acceptance %.3g), redrawing", draw, rate)
            continue
        contexts = np.concatenate(rows_x) if rows_x else np.empty((0, k, d))
        eps = np.concatenate(rows_eps) if rows_eps else np.empty(0)
        means = true_means(contexts, params, eps)
        # guard against ties created by rounding at the interval ends
        ok = passes_filter(means, spec.aleph_opt)
        contexts, means = contexts[ok][:n], means[ok][:n]
        if contexts.shape[0] < n:
            continue
        return FilteredDataset(spec, contexts, means, params, rate, n_candidates, draw)
    raise InfeasibleFilterError(
        f"acceptance rate below {min_acceptance:g} for {max_param_draws} parameter draws "
        f"(sigma={spec.param_scale}, aleph_opt={spec.aleph_opt}, d={d}, k={k})")


def save_dataset(dataset, path):
    """Write a dataset as header + float64 rows; the format round-trips bit-exactly.

    Layout: magic, uint64 header length, JSON header, then ``n`` rows of
    ``k*d`` context values followed by ``k`` means, then the ``k x d``
    parameter matrix. All floats little-endian float64.
    """
    spec = dataset.spec
    header = dict(asdict(spec), n=len(dataset), acceptance_rate=dataset.acceptance_rate,
                  n_candidates=dataset.n_candidates, param_draws=dataset.param_draws)
    blob = json.dumps(header, sort_keys=True).encode()
    n, k, d = dataset.contexts.shape[0], spec.n_arms, spec.n_features
    rows = np.concatenate(
        [dataset.contexts.reshape(n, k * d), dataset.means.reshape(n, k)], axis=1)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(rows, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(dataset.params, dtype="<f8").tobytes())


def load_dataset(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:len(MAGIC)] != MAGIC:
        raise DataError(f"{path}: not a linrs dataset file")
    buf = io.BytesIO(data[len(MAGIC):])
    try:
        (size,) = struct.unpack("<Q", buf.read(8))
        header = json.loads(buf.read(size))
    except (struct.error, ValueError):
        raise DataError(f"{path}: corrupt dataset header") from None
    n = header.pop("n")
    extras = {key: header.pop(key) for key in ("acceptance_rate", "n_candidates", "param_draws")}
    spec = SyntheticSpec(**header)
    k, d = spec.n_arms, spec.n_features
    width = k * d + k
    raw = buf.read()
    if len(raw) != 8 * (n * width + k * d):
        raise DataError(f"{path}: truncated dataset file")
    body = np.frombuffer(raw, dtype="<f8").astype(np.float64)
    rows = body[:n * width].reshape(n, width)
    return FilteredDataset(
        spec,
        rows[:, :k * d].reshape(n, k, d).copy(),
        rows[:, k * d:].copy(),
        body[n * width:].reshape(k, d).copy(),
        extras["acceptance_rate"],
        extras["n_candidates"],
        extras["param_draws"],
    )


def environment_round(dataset, t, rng):
    """Round ``t`` of the dataset (wrapping around) with Bernoulli rewards."""
    n = len(dataset)
    if n == 0:
        raise InvalidArgumentError("dataset is empty")
    i = t % n
    means = dataset.means[i]

    def sample(arm):
        return float(rng.random() < means[arm])

    return EnvironmentRound(dataset.contexts[i], means, sample)


class SyntheticEnvironment:
    """Replays a filtered dataset in a seeded random row order."""

    default_w = 0.1
    default_eta = 0.1
    default_horizon = 100_000

    def __init__(self, dataset):
        if len(dataset) == 0:
            raise DataError("dataset is empty")
        self.dataset = dataset
        self.n_arms = dataset.spec.n_arms
        self.n_features = dataset.spec.n_features
        self.default_aleph = dataset.spec.aleph_opt
        self.order = np.arange(len(dataset))

    def reset(self, rng):
        self.order = rng.permutation(len(self.dataset))
        return self

    def round(self, t, rng):
        return environment_round(self.dataset, int(self.order[t % len(self.order)]), rng)
