"""Exception hierarchy shared by every module."""


class PebblingError(Exception):
    """Base class for all errors raised by treepebble."""


class TreeError(PebblingError, ValueError):
    """The input edge list does not describe a tree."""


class SelfLoop(TreeError):
    pass


class DuplicateEdge(TreeError):
    pass


class CycleDetected(TreeError):
    pass


class Disconnected(TreeError):
    pass


class InvalidVertex(PebblingError, ValueError):
    pass


class ParseError(PebblingError, ValueError):
    pass


class EmptyTarget(PebblingError, ValueError):
    """Raised when a target of size zero reaches an entry point."""


class DegeneratePartition(PebblingError, ValueError):
    """The single-vertex tree has no paths; its Chung configuration is t-1 on the root."""


class BudgetExceeded(PebblingError):
    def __init__(self, states_explored, message=None):
        self.states_explored = states_explored
        super().__init__(message or f"search budget exceeded after {states_explored} states")


class CapExceeded(PebblingError):
    pass


class AttributionMissing(PebblingError):
    pass
