"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class DiophError(Exception):
    exit_code = 2


class InputError(DiophError):
    exit_code = 2


class ParamError(InputError):
    pass


class DomainError(InputError):
    pass


class RankDeficient(DiophError):
    exit_code = 2


class IllConditioned(DiophError):
    exit_code = 3


class PrecisionExhausted(DiophError):
    """Two quantities that decide a record differ by less than the comparison tolerance."""

    exit_code = 3


class PossViolation(InputError):
    """A nonzero integer x makes every form integral, so the approximation function vanishes."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(DiophError):
    exit_code = 5


class InsufficientData(DiophError):
    exit_code = 2


class EnvelopeInvalid(DiophError):
    exit_code = 2


class DegeneratePlane(DiophError):
    exit_code = 2


class InvariantViolation(DiophError):
    exit_code = 4
