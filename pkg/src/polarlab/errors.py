"""Exception types shared across the package."""


class PolarlabError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PolarlabError, ValueError):
    """An operation was called with out-of-domain parameters."""


class EdgeListFormatError(PolarlabError, ValueError):
    """An edge-list file could not be parsed.

    Carries the 1-based line number and, when applicable, the 1-based
    token position within the line.
    """

    def __init__(self, message: str, line: int, column: int | None = None):
        loc = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.column = column


class IsolatedNodeError(PolarlabError, ValueError):
    """A node with zero degree blocked a degree-weighted operation."""

    def __init__(self, node: int, message: str | None = None):
        super().__init__(message or f"node {node} has zero degree")
        self.node = node


class StructureError(PolarlabError, ValueError):
    """The graph violates a structural precondition (e.g. connectivity)."""


class DegenerateInputError(PolarlabError, ValueError):
    """An input vector is degenerate for the requested operation
    (all-zero, constant, or otherwise without usable variation)."""


class UndefinedMetricError(PolarlabError, ValueError):
    """The metric is mathematically undefined on this input (0/0)."""


class UnknownMetricError(PolarlabError, ValueError):
    """The metric id is not registered."""


class EigenConvergenceError(PolarlabError, RuntimeError):
    """The iterative eigensolver did not reach the residual tolerance.

    ``residual`` holds the last observed eigen-residual.
    """

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"eigensolver did not converge within {iterations} iterations "
            f"(last residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations
