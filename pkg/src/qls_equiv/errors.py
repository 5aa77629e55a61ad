"""Exception hierarchy shared by all modules."""


class QLSError(Exception):
    """Base class for every error raised by this package."""


class GridTooNarrow(QLSError, ValueError):
    pass


class UnsupportedState(QLSError, TypeError):
    pass


class CombinatorialLimitExceeded(QLSError, ValueError):
    pass


class QuadratureUnderResolved(QLSError, ArithmeticError):
    pass


class IndexOutOfRange(QLSError, IndexError):
    pass


class ConfigError(QLSError):
    pass


class ParseError(ConfigError):
    """Config text could not be parsed; message carries line/column."""


class ValidationError(ConfigError):
    """Config parsed but violates a field requirement or type invariant."""
