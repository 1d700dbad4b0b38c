from .base import BaseLinearPolicy
from .linrs import (
    LinRS,
    cross_entropy_loss,
    linrs_values,
    reliability_gradient,
    reliability_step,
    reliability_targets,
)
from .lints import LinTS
from .linucb import LinUCB

POLICIES = {"linrs": LinRS, "linucb": LinUCB, "lints": LinTS}

__all__ = [
    "BaseLinearPolicy",
    "LinRS",
    "LinTS",
    "LinUCB",
    "POLICIES",
    "cross_entropy_loss",
    "linrs_values",
    "reliability_gradient",
    "reliability_step",
    "reliability_targets",
]
