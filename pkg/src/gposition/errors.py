"""Exception hierarchy shared by every module."""


class GpError(Exception):
    """Base class for all library errors."""


class GraphError(GpError, ValueError):
    pass


class SelfLoop(GraphError):
    pass


class VertexOutOfRange(GraphError, IndexError):
    pass


class Disconnected(GraphError):
    pass


class NotDistinct(GraphError):
    pass


class ParseError(GraphError):
    pass


class NotATree(GpError, ValueError):
    pass


class NotANonLeaf(GpError, ValueError):
    pass


class FactorTooSmall(GpError, ValueError):
    pass


class NotAGpSet(GpError, ValueError):
    pass


class InfeasibleForcedSet(GpError, ValueError):
    pass


class BudgetExhausted(GpError):
    """Raised only on request; the solver normally returns a non-optimal result."""


class OrderOutOfRange(GpError, ValueError):
    pass
