"""Round-level data types and the regret / greedy-rate metrics."""

import csv
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .exceptions import InvalidArgumentError

ROUND_LOG_COLUMNS = (
    "step", "arm", "reward", "inst_regret", "cum_regret", "greedy", "decision_time_s",
)


@dataclass(frozen=True)
class EnvironmentRound:
    """One round of a contextual bandit.

    ``contexts`` holds one feature vector per arm (k x d), ``true_means`` the
    expected reward of each arm and ``reward_sampler`` draws the realised
    reward of a pulled arm.
    """

    contexts: np.ndarray
    true_means: np.ndarray
    reward_sampler: Callable[[int], float]

    @property
    def n_arms(self):
        return self.contexts.shape[0]

    @property
    def optimal_arm(self):
        return int(np.argmax(self.true_means))

    def regret(self, arm):
        """Gap between the best true mean and the true mean of ``arm``."""
        return float(self.true_means[self.optimal_arm] - self.true_means[arm])


@dataclass(frozen=True, slots=True)
class RoundLog:
    step: int
    arm: int
    reward: float
    inst_regret: float
    greedy: int
    decision_time_s: float = 0.0
    update_time_s: float = 0.0  # not written to CSV


def cumulative_regret(logs: Sequence[RoundLog]) -> np.ndarray:
    """Prefix sums of instantaneous regret over an ordered log."""
    return np.cumsum(np.fromiter((log.inst_regret for log in logs), dtype=np.float64, count=len(logs)))


def greedy_indicators(logs: Sequence[RoundLog]) -> np.ndarray:
    return np.fromiter((log.greedy for log in logs), dtype=np.float64, count=len(logs))


def greedy_rate(replications: Sequence[Sequence[RoundLog]]) -> np.ndarray:
    """Per-step mean of the greedy indicator across replications."""
    if len(replications) == 0:
        raise InvalidArgumentError("greedy_rate needs at least one replication")
    horizons = {len(logs) for logs in replications}
    if len(horizons) != 1:
        raise InvalidArgumentError(f"replications have mismatched horizons: {sorted(horizons)}")
    return np.mean([greedy_indicators(logs) for logs in replications], axis=0)


def write_round_logs(path, logs: Sequence[RoundLog]):
    cum = cumulative_regret(logs)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(ROUND_LOG_COLUMNS)
        for log, c in zip(logs, cum):
            writer.writerow([
                log.step, log.arm, repr(log.reward), repr(log.inst_regret),
                repr(float(c)), log.greedy, repr(log.decision_time_s),
            ])


def read_round_logs(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != ROUND_LOG_COLUMNS:
            raise InvalidArgumentError(f"{path}: unexpected columns {reader.fieldnames}")
        return [
            RoundLog(
                step=int(row["step"]),
                arm=int(row["arm"]),
                reward=float(row["reward"]),
                inst_regret=float(row["inst_regret"]),
                greedy=int(row["greedy"]),
                decision_time_s=float(row["decision_time_s"]),
            )
            for row in reader
        ]
