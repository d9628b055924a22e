"""Exception hierarchy shared by the rmnk modules."""


class RMNKError(Exception):
    """Base class for domain errors (CLI maps these to exit status 1)."""


class RhoOutOfRange(RMNKError, ValueError):
    def __init__(self, m, rho):
        self.m = m
        self.rho = rho
        self.interval = (-1.0 / (m - 1), 1.0)
        super().__init__(
            f"rho={rho} is not admissible for M={m}; "
            f"allowed interval is [{self.interval[0]:.6g}, {self.interval[1]:g}]"
        )


class NotPositiveSemidefinite(RMNKError, ValueError):
    pass


class InvalidK(RMNKError, ValueError):
    pass


class LengthMismatch(RMNKError, ValueError):
    pass


class FormatError(RMNKError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VersionError(FormatError):
    pass


class SpaceTooLarge(RMNKError):
    pass


class NonPositiveData(RMNKError, ValueError):
    pass


class ZeroVariance(RMNKError, ValueError):
    pass
