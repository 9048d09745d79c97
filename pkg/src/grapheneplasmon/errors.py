"""Exception types raised across the package."""


class PlasmonError(Exception):
    """Base class for all package errors."""


class ValidationError(PlasmonError, ValueError):
    """A parameter or config value violates its documented constraints."""


class ParseError(PlasmonError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class NoOscillatoryRoot(PlasmonError, ValueError):
    pass


class OutOfStencil(PlasmonError, IndexError):
    pass


class IncompleteHistory(PlasmonError, RuntimeError):
    pass


class UnknownScenario(PlasmonError, ValueError):
    pass


class KernelTooShort(PlasmonError, IndexError):
    pass


class NonFiniteValue(PlasmonError, FloatingPointError):
    def __init__(self, layer, what="v"):
        self.layer = layer
        super().__init__(f"non-finite {what} encountered at time layer {layer}")


class LengthMismatch(PlasmonError, ValueError):
    pass


class NonPositiveError(PlasmonError, ValueError):
    pass


class DegenerateRange(PlasmonError, ValueError):
    pass
