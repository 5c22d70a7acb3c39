"""Exceptions raised by the maxent4q modules."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class CalibrationError(RuntimeError):
    """The Schlafli normalization could not be pinned down."""


class InexactDivisionError(ArithmeticError):
    """Exact polynomial division left a nonzero remainder."""

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class StateFileError(ValueError):
    """A JSON state file is malformed or has the wrong shape."""

    def __init__(self, message, path=None, diagnostics=None):
        super().__init__(message)
        self.path = path
        self.diagnostics = diagnostics or []
