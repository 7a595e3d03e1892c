"""Exception types raised across the package."""


class DomainError(ValueError):
    """A parameter lies outside its physical range."""


class NonUnitaryError(ValueError):
    pass


class InvalidStateError(ValueError):
    """Amplitudes or a matrix that do not describe a normalised quantum state."""


class UndefinedVisibilityError(ArithmeticError):
    """Fringe contrast requested where the detector never fires for any phase."""


class DegenerateSignalError(ArithmeticError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class EmitError(OSError):
    """Writing a table failed; the message names the target path."""
