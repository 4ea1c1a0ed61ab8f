"""Exception hierarchy.  Each family maps to one CLI exit code."""


class AsramifyError(Exception):
    exit_code = 1


class UsageError(AsramifyError):
    exit_code = 1


class CapExceeded(UsageError):
    """An exhaustive scan would visit more points than the configured cap."""


class ParseError(AsramifyError):
    exit_code = 2

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PrecisionError(AsramifyError):
    exit_code = 3


class DomainError(AsramifyError):
    exit_code = 4


class FieldError(DomainError):
    pass


class FieldZeroDivision(FieldError, ZeroDivisionError):
    pass


class BranchComponentError(DomainError):
    """The test curve coincides with a component of the branch divisor."""


class UnramifiedError(DomainError):
    """A normalization step showed the cover is unramified along a branch component."""


class VerificationError(AsramifyError):
    exit_code = 5
