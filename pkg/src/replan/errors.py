"""Exception hierarchy shared by all replan modules."""


class ReplanError(Exception):
    """Base class for every error raised by this package."""


class IntegrityError(ReplanError):
    """An instance violates referential integrity or a structural invariant."""


class UnknownOccurrence(ReplanError, LookupError):
    pass


class UnknownTa(ReplanError, LookupError):
    pass


class DanglingReference(ReplanError, LookupError):
    """A solution refers to an occurrence or TA the instance does not know."""


class MalformedProblem(ReplanError, ValueError):
    pass


class LockedPairIneligible(ReplanError):
    def __init__(self, occurrence: str, ta: str):
        super().__init__(f"locked pair ({occurrence}, {ta}) is not an eligible assignment")
        self.occurrence = occurrence
        self.ta = ta


class StatusNotSolved(ReplanError):
    pass


class ChangeSyntaxError(ReplanError):
    def __init__(self, line: int, message: str, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class UnknownCommand(ChangeSyntaxError):
    pass


class UnknownId(ReplanError, LookupError):
    def __init__(self, change, ident: str):
        super().__init__(f"{change}: unknown id {ident!r}")
        self.change = change
        self.ident = ident


class ParseError(ReplanError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class GenerationFailed(ReplanError):
    pass


class ScenarioUnconstructible(ReplanError):
    pass


class TooLarge(ReplanError):
    pass


class Cancelled(ReplanError):
    pass
