"""Jester joke ratings as an 8-armed recommendation bandit."""

import csv
import math
from dataclasses import dataclass

import numpy as np

from ..core import EnvironmentRound
from ..exceptions import DataError

N_RATINGS = 40
RATING_MIN, RATING_MAX = -10.0, 10.0
CLAMP_TOL = 1e-6
MISSING_SENTINEL = 99.0
DEFAULT_FEATURE_COLUMNS = tuple(range(32))
DEFAULT_ACTION_COLUMNS = tuple(range(32, 40))


@dataclass(frozen=True)
class JesterRow:
    ratings: np.ndarray     # the 40 ratings of interest
    features: np.ndarray
    actions: np.ndarray


def _parse_rating(text):
    text = text.strip()
    if not text or text.lower() in ("nan", "na"):
        return math.nan
    value = float(text)
    return math.nan if value == MISSING_SENTINEL else value


def load_jester(path, *, columns=None, feature_columns=DEFAULT_FEATURE_COLUMNS,
                action_columns=DEFAULT_ACTION_COLUMNS):
    """Read one user per line and keep users who rated all 40 jokes of interest.

    ``columns`` selects the 40 file columns of interest (default: the first
    40). ``feature_columns`` and ``action_columns`` index into those 40.
    Missing ratings are empty fields, ``nan`` or the Jester sentinel ``99``.
    """
    columns = tuple(range(N_RATINGS)) if columns is None else tuple(columns)
    if len(columns) != N_RATINGS:
        raise DataError(f"expected {N_RATINGS} columns of interest, got {len(columns)}")
    feature_columns, action_columns = list(feature_columns), list(action_columns)
    if sorted(feature_columns + action_columns) != list(range(N_RATINGS)):
        raise DataError("feature and action columns must partition the 40 ratings")
    width = max(columns) + 1
    rows = []
    with open(path, newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if len(fields) < width:
                raise DataError(f"row {lineno}: expected at least {width} columns, got {len(fields)}")
            try:
                values = np.array([_parse_rating(fields[c]) for c in columns])
            except ValueError as exc:
                raise DataError(f"row {lineno}: {exc}") from None
            if np.isnan(values).any():
                continue
            out = (values < RATING_MIN - CLAMP_TOL) | (values > RATING_MAX + CLAMP_TOL)
            if out.any():
                col = columns[int(np.argmax(out))]
                raise DataError(f"row {lineno}, column {col}: rating {values[out][0]} outside [-10, 10]")
            values = np.clip(values, RATING_MIN, RATING_MAX)
            rows.append(JesterRow(values, values[feature_columns], values[action_columns]))
    return rows


def jester_round(row):
    """Every arm sees the user's feature ratings; the reward is the arm's joke rating."""
    k = row.actions.shape[0]
    contexts = np.tile(row.features, (k, 1))
    means = row.actions.copy()

    def sample(arm):
        return float(means[arm])

    return EnvironmentRound(contexts, means, sample)


class JesterEnvironment:
    n_arms = len(DEFAULT_ACTION_COLUMNS)
    default_aleph = 2.0
    default_w = 0.01
    default_eta = 0.01
    default_horizon = 10_000

    def __init__(self, rows):
        if not rows:
            raise DataError("jester dataset is empty")
        self.rows = rows
        self.n_arms = rows[0].actions.shape[0]
        self.n_features = rows[0].features.shape[0]
        self.order = np.arange(len(rows))

    def reset(self, rng):
        self.order = rng.permutation(len(self.rows))
        return self

    def round(self, t, rng):
        return jester_round(self.rows[self.order[t % len(self.rows)]])
