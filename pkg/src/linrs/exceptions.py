"""Exception hierarchy shared by every module of the package."""


class LinrsError(Exception):
    """Base class for all errors raised by linrs."""


class InvalidArgumentError(LinrsError, ValueError):
    """Shapes, dimensions or values that violate an operation's preconditions."""


class NumericalError(LinrsError, ArithmeticError):
    """Non-finite inputs or matrices that are singular to working precision."""


class DataError(LinrsError, ValueError):
    """A dataset file is malformed or contains out-of-vocabulary values."""


class InfeasibleFilterError(DataError):
    """The constant-aspiration filter accepts too few candidate rows."""


class ConfigError(LinrsError, ValueError):
    """An experiment configuration field is missing or invalid."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
