"""Exception hierarchy shared by the solver, the models and the CLI."""


class FuzzyDeaError(Exception):
    """Base class for every error raised by this package."""


class MalformedLPError(FuzzyDeaError, ValueError):
    """The linear program has non-finite entries or inconsistent shapes."""


class DomainError(FuzzyDeaError, ValueError):
    """A value lies outside the domain an operation is defined on."""


class ParseError(FuzzyDeaError, ValueError):
    """Input data could not be parsed.

    ``row`` is the 1-based line number in the source file (header is line 1)
    and ``column`` the offending column name, when known.
    """

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class AnalysisError(FuzzyDeaError, RuntimeError):
    """An efficiency LP did not reach an optimal solution."""

    def __init__(self, message, dmu=None, alpha=None, status=None):
        self.dmu = dmu
        self.alpha = alpha
        self.status = status
        super().__init__(message)
