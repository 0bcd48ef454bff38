"""Exception types shared across the package."""


class CycrakError(Exception):
    """Base class for all package errors."""


class ParseError(CycrakError, ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraphError(CycrakError, ValueError):
    pass


class DomainError(CycrakError, ValueError):
    """An argument lies outside the domain of the operation."""


class DisconnectedError(DomainError):
    pass


class ConvergenceError(CycrakError, RuntimeError):
    pass


class NumericalError(CycrakError, RuntimeError):
    pass


class DegenerateThresholdError(CycrakError, ValueError):
    pass


class EmptyBasisError(CycrakError, ValueError):
    pass


class ExhaustionError(CycrakError):
    """A selection rule ran out of candidates before reaching ``k``.

    The partially built influencer list is kept on ``partial`` (selection
    order) together with the audit trail, so callers can resume from it.
    """

    def __init__(self, framework, partial, k, audit=None):
        super().__init__(
            f"{framework}: ranking exhausted with {len(partial)} of {k} influencers"
        )
        self.framework = framework
        self.partial = list(partial)
        self.k = k
        self.audit = list(audit or [])


class ExperimentError(CycrakError):
    """A module error raised inside one experiment cell; ``cell`` names it."""

    def __init__(self, cell: dict, cause: Exception):
        coords = ", ".join(f"{k}={v}" for k, v in cell.items())
        super().__init__(f"[{coords}] {type(cause).__name__}: {cause}")
        self.cell = cell
        self.cause = cause
