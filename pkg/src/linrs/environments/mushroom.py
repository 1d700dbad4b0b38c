"""UCI Mushroom (agaricus-lepiota) loader and the eat / no-eat bandit."""

import csv
from dataclasses import dataclass

import numpy as np

from ..core import EnvironmentRound
from ..exceptions import DataError

EAT, NO_EAT = 0, 1

# Category symbols present in the canonical 8124-row file, per attribute and in
# the order of the attribute documentation. "?" (missing stalk-root) is a
# category of its own. One indicator per symbol gives 117 columns.
ATTRIBUTES = (
    ("cap-shape", "bcxfks"),
    ("cap-surface", "fgys"),
    ("cap-color", "nbcgrpuewy"),
    ("bruises", "tf"),
    ("odor", "alcyfmnps"),
    ("gill-attachment", "af"),
    ("gill-spacing", "cw"),
    ("gill-size", "bn"),
    ("gill-color", "knbhgropuewy"),
    ("stalk-shape", "et"),
    ("stalk-root", "bcer?"),
    ("stalk-surface-above-ring", "fyks"),
    ("stalk-surface-below-ring", "fyks"),
    ("stalk-color-above-ring", "nbcgopewy"),
    ("stalk-color-below-ring", "nbcgopewy"),
    ("veil-type", "p"),
    ("veil-color", "nowy"),
    ("ring-number", "not"),
    ("ring-type", "eflnp"),
    ("spore-print-color", "knbhrouwy"),
    ("population", "acnsvy"),
    ("habitat", "glmpuwd"),
)
N_FEATURES = sum(len(symbols) for _, symbols in ATTRIBUTES)
CLASS_SYMBOLS = {"e": True, "p": False}

_OFFSETS = np.cumsum([0] + [len(s) for _, s in ATTRIBUTES])[:-1]
_INDEX = [{sym: off + j for j, sym in enumerate(symbols)}
          for off, (_, symbols) in zip(_OFFSETS, ATTRIBUTES)]

EDIBLE_MEANS = np.array([5.0, 0.0])
POISONOUS_MEANS = np.array([-15.0, 0.0])


@dataclass(frozen=True)
class MushroomRow:
    edible: bool
    attributes: tuple
    context: np.ndarray


def encode_attributes(attributes, row=None):
    """One-hot encode the 22 attribute symbols of one mushroom."""
    if len(attributes) != len(ATTRIBUTES):
        raise DataError(f"row {row}: expected {len(ATTRIBUTES)} attributes, got {len(attributes)}")
    x = np.zeros(N_FEATURES)
    for col, (sym, index) in enumerate(zip(attributes, _INDEX), start=1):
        try:
            x[index[sym]] = 1.0
        except KeyError:
            raise DataError(
                f"row {row}, column {col} ({ATTRIBUTES[col - 1][0]}): unknown symbol {sym!r}"
            ) from None
    return x


def load_mushroom(path):
    """Parse the comma-separated file: class symbol then 22 attribute symbols."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            fields = [f.strip() for f in fields]
            if len(fields) != len(ATTRIBUTES) + 1:
                raise DataError(
                    f"row {lineno}: expected {len(ATTRIBUTES) + 1} columns, got {len(fields)}")
            if fields[0] not in CLASS_SYMBOLS:
                raise DataError(f"row {lineno}, column 0 (class): unknown symbol {fields[0]!r}")
            attrs = tuple(fields[1:])
            rows.append(MushroomRow(CLASS_SYMBOLS[fields[0]], attrs, encode_attributes(attrs, lineno)))
    return rows


def mushroom_counts(rows):
    """``(total, edible, poisonous)``."""
    edible = sum(r.edible for r in rows)
    return len(rows), edible, len(rows) - edible


def mushroom_round(row, rng, *, reward_edible=5.0, reward_poison_good=5.0,
                   reward_poison_bad=-35.0, prob_poison_bad=0.5):
    """Two-arm round: arm 0 eats the mushroom, arm 1 leaves it."""
    contexts = np.stack([row.context, row.context])
    if row.edible:
        means = np.array([reward_edible, 0.0])
    else:
        poison_mean = prob_poison_bad * reward_poison_bad + (1 - prob_poison_bad) * reward_poison_good
        means = np.array([poison_mean, 0.0])

    def sample(arm):
        if arm == NO_EAT:
            return 0.0
        if row.edible:
            return reward_edible
        return reward_poison_bad if rng.random() < prob_poison_bad else reward_poison_good

    return EnvironmentRound(contexts, means, sample)


class MushroomEnvironment:
    """Presents mushrooms in a seeded random order, wrapping past the end."""

    n_arms = 2
    n_features = N_FEATURES
    default_aleph = 4.0
    default_w = 0.1
    default_eta = 0.1
    default_horizon = 8000

    def __init__(self, rows):
        if not rows:
            raise DataError("mushroom dataset is empty")
        self.rows = rows
        self.order = np.arange(len(rows))

    def reset(self, rng):
        self.order = rng.permutation(len(self.rows))
        return self

    def round(self, t, rng):
        return mushroom_round(self.rows[self.order[t % len(self.rows)]], rng)
