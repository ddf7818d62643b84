"""Exception hierarchy shared by every module of the package."""


class NormnetError(Exception):
    """Base class for all errors raised by normnet."""


class NetworkError(NormnetError, ValueError):
    """A structural precondition of a network operation does not hold."""


class NotACherry(NetworkError):
    pass


class NotAReticulatedCherry(NetworkError):
    pass


class GtNotTreeVertex(NetworkError):
    pass


class GtIsRoot(NetworkError):
    pass


class DegenerateBaseCase(NetworkError):
    """Reducing a leaf of a two-leaf network would leave no phylogenetic network."""


class WeightInfeasible(NetworkError):
    pass


class NoOutgroup(NetworkError):
    pass


class NotAnOutgroup(NetworkError):
    pass


class NotTreeChild(NetworkError):
    pass


class CapExceeded(NormnetError, RuntimeError):
    """Path enumeration produced more paths than the configured cap."""


class NotRealizable(NormnetError, ValueError):
    """The distance data is not realised by any network of the requested class."""


class Inconsistent(NotRealizable):
    """Witnesses disagree on which leaf of the pair is the reticulation leaf."""


class EmptyXt(NotRealizable):
    pass


class NoCandidate(NotRealizable):
    pass


class NoUniqueDescendant(NotRealizable):
    pass


class InfeasibleSpec(NormnetError, ValueError):
    pass


class ParseError(NormnetError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class ValidationError(NormnetError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid input: " + "; ".join(self.violations))
