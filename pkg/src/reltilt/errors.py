"""Exception types shared across the package."""


class ReltiltError(Exception):
    """Base class for all domain errors."""


class CapExceeded(ReltiltError):
    """An enumeration would exceed the configured candidate budget."""

    def __init__(self, message, size=None, cap=None, where=None):
        super().__init__(message)
        self.size = size
        self.cap = cap
        self.where = where


class NotAGenerator(ReltiltError):
    def __init__(self, missing):
        self.missing = list(missing)
        names = ", ".join(f"P{v}" for v in self.missing)
        super().__init__(f"generator is not additive: missing projective(s) {names}")


class DuplicateSummand(ReltiltError):
    pass


class IncompleteCatalog(ReltiltError):
    pass


class HypothesisFailed(ReltiltError):
    pass


class NotTauRigid(ReltiltError):
    pass


class NotAdmissible(ReltiltError):
    def __init__(self, counterexample, message=None):
        self.counterexample = counterexample
        super().__init__(message or "the algebra is not F-admissible")


class AboveBound(ReltiltError):
    pass


class ParseError(ReltiltError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
