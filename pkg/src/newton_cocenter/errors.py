"""Exception types shared across the library."""


class ConfigurationError(ValueError):
    """Unsupported group descriptor or malformed configuration."""


class InputError(ValueError):
    """Malformed input text or violated operation precondition."""


class ResourceError(RuntimeError):
    """A configured enumeration cap would be exceeded."""


class LogicError(AssertionError):
    """An internal state that contradicts minimal-length theory.

    Raising this means a bug: the guarded conditions are theorems and
    must never fail on valid inputs.
    """
