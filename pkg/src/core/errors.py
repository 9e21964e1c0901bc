"""Exception hierarchy shared by the solvers, bounds and the CLI."""


class NanipError(Exception):
    """Base class for all toolkit errors."""
    exit_code = 1


class InputError(NanipError, ValueError):
    """Malformed input: graph files, cost specs, parameters, sequences."""
    exit_code = 2


class SizeGuardError(NanipError, ValueError):
    """Instance too large for the requested exact algorithm."""
    exit_code = 3


class InvariantViolation(NanipError, AssertionError):
    """A computed result broke one of the guaranteed relations."""
    exit_code = 4
