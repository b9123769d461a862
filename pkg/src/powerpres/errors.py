"""Exception classes shared across the package."""


class PowerPresError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(PowerPresError, ValueError):
    """A word, presentation or file does not fit the expected shape."""


class ParseError(MalformedInputError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class TietzeError(PowerPresError):
    """A Tietze move was requested whose precondition does not hold."""


class InvalidWitnessError(PowerPresError):
    """A commutator witness is missing, has nonzero exponent sums, or fails the oracle."""


class HypothesisViolation(PowerPresError):
    """The input group does not satisfy a construction's homological hypothesis."""


class FactorizationError(PowerPresError):
    """An old generator could not be expressed in a new generating set."""

    def __init__(self, message, stage=None):
        self.stage = stage
        if stage is not None:
            message = f"stage {stage}: {message}"
        super().__init__(message)


class VerificationError(PowerPresError):
    """An oracle check (permutation evaluation) failed."""


class NotAMemberError(PowerPresError):
    """A permutation does not lie in the group described by a stabilizer chain."""


class BudgetExhausted(PowerPresError):
    """A budgeted search ran out of effort before finding an answer."""
