from .jester import JesterEnvironment, JesterRow, jester_round, load_jester
from .mushroom import MushroomEnvironment, MushroomRow, load_mushroom, mushroom_counts, mushroom_round
from .synthetic import (
    FilteredDataset,
    SyntheticEnvironment,
    SyntheticSpec,
    build_filtered_dataset,
    environment_round,
    load_dataset,
    passes_filter,
    sample_parameters,
    save_dataset,
    true_means,
)

__all__ = [
    "FilteredDataset",
    "JesterEnvironment",
    "JesterRow",
    "MushroomEnvironment",
    "MushroomRow",
    "SyntheticEnvironment",
    "SyntheticSpec",
    "build_filtered_dataset",
    "environment_round",
    "jester_round",
    "load_dataset",
    "load_jester",
    "load_mushroom",
    "mushroom_counts",
    "mushroom_round",
    "passes_filter",
    "sample_parameters",
    "save_dataset",
    "true_means",
]
