"""Linear risk-sensitive satisficing bandits with LinUCB / LinTS baselines."""

from .config import ExperimentConfig
from .core import EnvironmentRound, RoundLog, cumulative_regret, greedy_rate
from .harness import ExperimentResult, measure_runtime, run_experiment, run_replication
from .policies import LinRS, LinTS, LinUCB

__version__ = "0.1.0"

__all__ = [
    "EnvironmentRound",
    "ExperimentConfig",
    "ExperimentResult",
    "LinRS",
    "LinTS",
    "LinUCB",
    "RoundLog",
    "cumulative_regret",
    "greedy_rate",
    "measure_runtime",
    "run_experiment",
    "run_replication",
]
