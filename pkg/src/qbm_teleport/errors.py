"""Exception hierarchy shared by all modules."""


class QbmError(Exception):
    """Base class for errors raised by qbm_teleport."""


class ValidationError(QbmError, ValueError):
    """Invalid input: out-of-domain argument, unphysical matrix, bad grid."""


class GridRangeError(ValidationError):
    """Time query outside the range covered by a coefficient grid."""


class ConfigError(ValidationError):
    """Bad configuration value; ``key`` names the offending entry."""

    def __init__(self, key, message, line=None):
        self.key = key
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {message}")


class NumericError(QbmError, ArithmeticError):
    """A computation left its numerically valid regime."""


class QuadratureError(NumericError):
    """Adaptive quadrature failed to reach the requested tolerance."""
