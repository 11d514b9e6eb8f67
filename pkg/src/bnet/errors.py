"""Exception types raised across the package."""


class BNetError(Exception):
    """Base class for all domain errors."""


class CycleDetected(BNetError):
    pass


class InvalidNode(BNetError):
    pass


class DuplicateEdge(BNetError):
    pass


class UnassignedVariable(BNetError):
    pass


class StateSpaceTooLarge(BNetError):
    pass


class DomainError(BNetError, ValueError):
    pass


class NotGraded(BNetError):
    """Raised when the slice DP is asked to run on a non-graded network.

    ``witness`` is the variable whose hidden parents violate gradedness and
    ``parent`` is one offending hidden parent.
    """

    def __init__(self, message, witness=None, parent=None):
        super().__init__(message)
        self.witness = witness
        self.parent = parent


class UngradedSlice(BNetError):
    pass


class SliceTooLarge(BNetError):
    pass


class NoExplanation(BNetError):
    pass


class InfeasibleConfig(BNetError):
    pass


class UnknownFixture(BNetError):
    pass


class ParseError(BNetError):
    """Malformed input; ``path`` is a JSON-path style location."""

    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ValidationError(BNetError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnknownName(BNetError):
    pass
