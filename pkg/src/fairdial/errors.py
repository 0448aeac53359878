"""Exception hierarchy shared across the package."""


class FairdialError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FairdialError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class ParseError(InputError):
    """A text or JSON artefact could not be parsed.

    Carries the offending line number when one is known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(FairdialError):
    """The requested computation exceeds a hard size limit."""


class StatsError(FairdialError):
    """A statistical routine received a degenerate sample."""


class SimulationFault(FairdialError):
    """The physics integration produced non-finite state."""
