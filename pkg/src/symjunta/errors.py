class SymJuntaError(Exception):
    pass


class ArityError(SymJuntaError, ValueError):
    pass


class ResourceCapError(SymJuntaError):
    """A requested size exceeds the configured enumeration/transform cap."""


class FitError(SymJuntaError, ValueError):
    pass


class InvalidQueryError(SymJuntaError, ValueError):
    pass


class InvalidModulusError(SymJuntaError, ValueError):
    pass


class CertificateUnavailable(SymJuntaError):
    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class InvalidMeasureError(SymJuntaError, ValueError):
    pass


class BudgetError(SymJuntaError):
    """The oracle's example budget ran out before every weight class was seen."""


class LearningFailure(SymJuntaError):
    """Level search found nothing and the special cases did not fit."""


class ExampleParseError(SymJuntaError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
