"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A constructor or operation argument violates its stated constraint."""


class ValidationError(ValueError):
    """Input data fails a structural check (asymmetry, bad matrix, ...)."""


class DegenerateInputError(ValueError):
    """Mathematically undefined case (zero-degree node, 0/0 coefficient)."""


class DisconnectedGraphError(ValueError):
    """Random-walk quantity requested on a graph that is not connected."""


class BelowMinimumPowerError(ValueError):
    """Transmit power below the minimum required power: no link possible."""


class EstimationError(RuntimeError):
    """Monte-Carlo estimate could not be formed (e.g. every walk truncated)."""
