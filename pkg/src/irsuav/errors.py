"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A configuration field is missing or out of range.

    The message always starts with the offending field name.
    """


class NotReadyError(RuntimeError):
    """An operation was requested before its preconditions were met
    (e.g. sampling a replay buffer that holds fewer transitions than asked)."""


class NumericsError(RuntimeError):
    """A non-finite value appeared where the computation cannot continue.

    Raised before any parameter is mutated, so state stays consistent.
    """
