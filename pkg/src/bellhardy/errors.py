"""Exception hierarchy shared by every module."""


class BellError(Exception):
    """Base class for all errors raised by bellhardy."""


class DimensionError(BellError, ValueError):
    """Operands live on different party counts, or an index is out of range."""


class PartyLimitError(DimensionError):
    """Party count outside ``1..limit``."""


class IncompleteTableError(BellError, ValueError):
    """A coordinate table is missing entries."""


class InvalidBoxError(BellError, ValueError):
    """Table is not a normalized, non-negative box."""


class SignalingError(BellError, ValueError):
    """A non-signaling box was required but the input signals."""


class NotAnInequalityError(BellError, ValueError):
    """Functional takes a negative value on some deterministic vertex."""

    def __init__(self, message, strategy=None, value=None):
        super().__init__(message)
        self.strategy = strategy
        self.value = value


class NotNormalizableError(BellError, ValueError):
    """Functional has non-positive total weight and cannot be standardized."""
