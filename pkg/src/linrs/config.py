"""Experiment configuration: a flat key/value record stored as JSON."""

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import ConfigError

ENVIRONMENTS = ("synthetic", "mushroom", "jester")
POLICY_NAMES = ("linrs", "linucb", "lints")


@dataclass
class ExperimentConfig:
    environment: str = "synthetic"
    data_path: Optional[str] = None
    jester_columns: Optional[list] = None
    jester_feature_columns: Optional[list] = None
    jester_action_columns: Optional[list] = None
    policy: str = "linrs"
    # None means "use the environment's default"
    aleph: Optional[float] = None
    w: Optional[float] = None
    eta: Optional[float] = None
    alpha: float = 0.1
    lam: float = 0.25
    a0: float = 6.0
    b0: float = 6.0
    horizon: Optional[int] = None
    replications: int = 100
    seed: int = 0
    initial_pulls: int = 10
    batch_size: int = 20
    epochs: int = 5
    queue_size: int = 100
    immediate: bool = False
    inverse: str = "solve"
    n_jobs: int = 1
    output: str = "results"
    save_logs: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.environment not in ENVIRONMENTS:
            raise ConfigError("environment", f"must be one of {ENVIRONMENTS}, got {self.environment!r}")
        if self.policy not in POLICY_NAMES:
            raise ConfigError("policy", f"must be one of {POLICY_NAMES}, got {self.policy!r}")
        for name in ("replications", "initial_pulls", "batch_size", "epochs", "queue_size"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(name, f"must be an integer >= 1, got {value!r}")
        if self.horizon is not None and (not isinstance(self.horizon, int) or self.horizon < 1):
            raise ConfigError("horizon", f"must be an integer >= 1, got {self.horizon!r}")
        for name in ("aleph", "w", "eta", "alpha", "lam", "a0", "b0"):
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(name, f"must be a finite number, got {value!r}")
        for name in ("w", "eta", "lam", "a0", "b0"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigError(name, f"must be positive, got {value!r}")
        if self.alpha < 0:
            raise ConfigError("alpha", f"must be non-negative, got {self.alpha!r}")
        if self.inverse not in ("solve", "sherman-morrison"):
            raise ConfigError("inverse", f"must be 'solve' or 'sherman-morrison', got {self.inverse!r}")
        return self

    def resolved(self, environment):
        """Copy with environment defaults filled in for unset fields."""
        cfg = dataclasses.replace(self)
        if cfg.aleph is None:
            cfg.aleph = float(environment.default_aleph)
        if cfg.w is None:
            cfg.w = float(environment.default_w)
        if cfg.eta is None:
            cfg.eta = float(environment.default_eta)
        if cfg.horizon is None:
            cfg.horizon = int(environment.default_horizon)
        return cfg.validate()

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(unknown[0], "unknown configuration key")
        return cls(**data)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError("<file>", f"{path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("<file>", f"{path} must contain a JSON object")
        return cls.from_dict(data)

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
