"""Replication runner, aggregation and result files."""

import csv
import json
import os
import time
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .config import ExperimentConfig
from .core import RoundLog, cumulative_regret, greedy_rate
from .environments import (
    JesterEnvironment,
    MushroomEnvironment,
    SyntheticEnvironment,
    load_dataset,
    load_jester,
    load_mushroom,
)
from .environments.jester import DEFAULT_ACTION_COLUMNS, DEFAULT_FEATURE_COLUMNS
from .exceptions import ConfigError, DataError, LinrsError, NumericalError
from .policies import LinRS, LinTS, LinUCB

CURVE_COLUMNS = ("step", "mean_cum_regret", "greedy_rate")
SUMMARY_COLUMNS = ("policy", "mean_runtime_s", "final_regret_mean", "final_regret_std", "seeds")


class ReplicationError(LinrsError, RuntimeError):
    """A replication failed; ``index`` names it and ``__cause__`` holds the error."""

    def __init__(self, index, cause):
        super().__init__(f"replication {index} failed: {type(cause).__name__}: {cause}")
        self.index = index


def load_environment(config):
    """Build the environment named by ``config`` from its data file."""
    path = config.data_path
    if not path:
        raise ConfigError("data_path", f"{config.environment} environment needs a data file")
    if not os.path.exists(path):
        raise DataError(f"data file not found: {path}")
    if config.environment == "synthetic":
        return SyntheticEnvironment(load_dataset(path))
    if config.environment == "mushroom":
        return MushroomEnvironment(load_mushroom(path))
    rows = load_jester(
        path,
        columns=config.jester_columns,
        feature_columns=config.jester_feature_columns or DEFAULT_FEATURE_COLUMNS,
        action_columns=config.jester_action_columns or DEFAULT_ACTION_COLUMNS,
    )
    return JesterEnvironment(rows)


def make_policy(config, seed=None):
    """Fresh policy for a resolved config."""
    if config.policy == "linrs":
        policy = LinRS(aleph=config.aleph, w=config.w, eta=config.eta,
                       batch_size=config.batch_size, epochs=config.epochs,
                       queue_size=config.queue_size, immediate=config.immediate,
                       inverse=config.inverse)
    elif config.policy == "linucb":
        policy = LinUCB(alpha=config.alpha, batch_size=config.batch_size,
                        immediate=config.immediate, inverse=config.inverse)
    elif config.policy == "lints":
        policy = LinTS(lam=config.lam, a0=config.a0, b0=config.b0,
                       batch_size=config.batch_size, immediate=config.immediate,
                       inverse=config.inverse)
    else:
        raise ConfigError("policy", f"unknown policy {config.policy!r}")
    return policy.reset(seed)


def replication_seeds(master_seed, index):
    """``(environment_seed, policy_seed)`` for one replication."""
    seq = np.random.SeedSequence(master_seed, spawn_key=(index,))
    env_seq, policy_seq = seq.spawn(2)
    return int(env_seq.generate_state(1, np.uint64)[0]), int(policy_seq.generate_state(1, np.uint64)[0])


def run_replication(config, index, environment=None, policy=None):
    """Run one replication and return its per-step logs.

    The first ``initial_pulls * n_arms`` steps pull the arms in turn; the
    policy picks the rest. ``policy`` may be supplied to run a custom
    object with the same select/observe/greedy_arm surface.
    """
    if environment is None:
        environment = load_environment(config)
    config = config.resolved(environment)
    k = environment.n_arms
    n_forced = config.initial_pulls * k
    if config.horizon < n_forced:
        raise ConfigError(
            "horizon", f"horizon {config.horizon} is shorter than the {n_forced} initial pulls")
    env_seed, policy_seed = replication_seeds(config.seed, index)
    env_rng = np.random.default_rng(env_seed)
    environment.reset(env_rng)
    if policy is None:
        policy = make_policy(config, policy_seed)
    elif hasattr(policy, "reset"):
        policy.reset(policy_seed)

    clock = time.perf_counter
    logs = []
    for t in range(config.horizon):
        rnd = environment.round(t, env_rng)
        contexts = np.ascontiguousarray(rnd.contexts, dtype=np.float64)
        greedy = policy.greedy_arm(contexts, check_input=False)
        start = clock()
        if t < n_forced:
            arm = t % k
        else:
            arm = int(policy.select(contexts, check_input=False))
        decided = clock()
        reward = rnd.reward_sampler(arm)
        policy.observe(contexts, arm, reward, check_input=False)
        updated = clock()
        logs.append(RoundLog(
            step=t + 1,
            arm=arm,
            reward=float(reward),
            inst_regret=rnd.regret(arm),
            greedy=int(arm == greedy),
            decision_time_s=decided - start,
            update_time_s=updated - decided,
        ))
    return logs


@dataclass
class ExperimentResult:
    config: dict
    mean_cum_regret: np.ndarray
    greedy_rate: np.ndarray
    cum_regrets: np.ndarray         # (R, T)
    runtimes: np.ndarray            # decision + update seconds per replication
    seeds: list
    logs: list = field(default_factory=list, repr=False)

    @property
    def final_regrets(self):
        return self.cum_regrets[:, -1]

    @property
    def mean_runtime(self):
        return float(np.mean(self.runtimes))

    @property
    def horizon(self):
        return self.cum_regrets.shape[1]


def replication_runtime(logs):
    return float(sum(log.decision_time_s + log.update_time_s for log in logs))


def _guarded_replication(config, index, environment):
    try:
        return run_replication(config, index, environment)
    except Exception as exc:
        raise ReplicationError(index, exc) from exc


def aggregate(config, replications, seeds, keep_logs=False):
    """Combine per-replication logs into an ExperimentResult."""
    cum = np.array([cumulative_regret(logs) for logs in replications])
    return ExperimentResult(
        config=config.to_dict(),
        mean_cum_regret=cum.mean(axis=0),
        greedy_rate=greedy_rate(replications),
        cum_regrets=cum,
        runtimes=np.array([replication_runtime(logs) for logs in replications]),
        seeds=list(seeds),
        logs=list(replications) if keep_logs else [],
    )


def run_experiment(config, environment=None, *, keep_logs=False):
    """Run ``config.replications`` replications and aggregate them."""
    config.validate()
    if environment is None:
        environment = load_environment(config)
    config = config.resolved(environment)
    indices = range(config.replications)
    if config.n_jobs == 1:
        replications = [_guarded_replication(config, i, environment) for i in indices]
    else:
        replications = Parallel(n_jobs=config.n_jobs)(
            delayed(_guarded_replication)(config, i, environment) for i in indices)
    seeds = [replication_seeds(config.seed, i)[1] for i in indices]
    return aggregate(config, replications, seeds, keep_logs=keep_logs)


def measure_runtime(result, reference):
    """``(mean seconds per replication, ratio to the reference run)``."""
    seconds = result.mean_runtime
    ref = reference.mean_runtime
    if not ref > 0:
        raise NumericalError(f"reference run time is {ref}; cannot form a ratio")
    return seconds, seconds / ref


def summary_row(result):
    final = result.final_regrets
    return {
        "policy": result.config["policy"],
        "mean_runtime_s": repr(result.mean_runtime),
        "final_regret_mean": repr(float(final.mean())),
        "final_regret_std": repr(float(final.std(ddof=1)) if final.size > 1 else 0.0),
        "seeds": ";".join(str(s) for s in result.seeds),
    }


def write_curves(path, result):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_COLUMNS)
        for t, (r, g) in enumerate(zip(result.mean_cum_regret, result.greedy_rate), start=1):
            writer.writerow([t, repr(float(r)), repr(float(g))])


def write_summary(path, rows, extra_columns=()):
    columns = tuple(extra_columns) + SUMMARY_COLUMNS
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)


def write_results(result, out_dir):
    """Write curves.csv, summary.csv and config.json under ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    write_curves(os.path.join(out_dir, "curves.csv"), result)
    write_summary(os.path.join(out_dir, "summary.csv"), [summary_row(result)])
    with open(os.path.join(out_dir, "config.json"), "w") as fh:
        json.dump(result.config, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out_dir


def read_curves(path):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 1], data[:, 2]


__all__ = [
    "ExperimentConfig",
    "ExperimentResult",
    "ReplicationError",
    "aggregate",
    "load_environment",
    "make_policy",
    "measure_runtime",
    "read_curves",
    "replication_seeds",
    "run_experiment",
    "run_replication",
    "summary_row",
    "write_results",
]
