"""Tabular risk-sensitive satisficing (RS) and the optimal aspiration level."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidArgumentError


@dataclass
class RsTable:
    """Selection counts, running mean values and the aspiration level."""

    counts: np.ndarray
    values: np.ndarray
    aspiration: float
    total: int = field(init=False)

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64).copy()
        self.values = np.asarray(self.values, dtype=np.float64).copy()
        if self.counts.shape != self.values.shape or self.counts.ndim != 1:
            raise InvalidArgumentError("counts and values must be 1-D arrays of equal length")
        if np.any(self.counts < 0):
            raise InvalidArgumentError("counts must be non-negative")
        self.total = int(self.counts.sum())

    @property
    def n_arms(self):
        return self.counts.shape[0]

    @classmethod
    def empty(cls, n_arms, aspiration):
        return cls(np.zeros(n_arms, dtype=np.int64), np.zeros(n_arms), aspiration)

    def record(self, arm, reward):
        """Add one observation of ``arm`` to the running mean."""
        self.counts[arm] += 1
        self.total += 1
        self.values[arm] += (reward - self.values[arm]) / self.counts[arm]


def rs_values(table):
    """RS value ``(n_a / N) * (E_a - aspiration)`` for every arm."""
    if table.total < 1:
        raise InvalidArgumentError("RS value is undefined before the first trial (N == 0)")
    return table.counts / table.total * (table.values - table.aspiration)


def rs_value(table, arm):
    return float(rs_values(table)[arm])


def aleph_opt(means):
    """Midpoint of the largest and second-largest arm means."""
    means = np.asarray(means, dtype=np.float64).ravel()
    if means.size < 2:
        raise InvalidArgumentError("the optimal aspiration level needs at least two arms")
    second, first = np.partition(means, -2)[-2:]
    return float((first + second) / 2.0)


def initialize_table(n_arms, aspiration, reward_sampler):
    """Pull every arm once so that all counts are positive."""
    table = RsTable.empty(n_arms, aspiration)
    for arm in range(n_arms):
        table.record(arm, reward_sampler(arm))
    return table


def rs_policy_step(table, reward_sampler):
    """Pull the RS-greedy arm, update ``table`` in place and return ``(arm, table)``."""
    arm = int(np.argmax(rs_values(table)))
    table.record(arm, reward_sampler(arm))
    return arm, table


def simulate_bernoulli_rs(means, aspiration, n_steps, rng):
    """Run tabular RS on Bernoulli arms; returns the chosen arm at every step.

    The first ``len(means)`` steps are the initial one-pull-per-arm sweep.
    """
    means = np.asarray(means, dtype=np.float64)
    rng = np.random.default_rng(rng)

    def sampler(arm):
        return float(rng.random() < means[arm])

    k = means.shape[0]
    table = initialize_table(k, aspiration, sampler)
    chosen = np.empty(n_steps, dtype=np.int64)
    chosen[:k] = np.arange(k)
    for t in range(k, n_steps):
        chosen[t], _ = rs_policy_step(table, sampler)
    return chosen
