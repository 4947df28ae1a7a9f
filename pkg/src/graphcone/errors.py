"""Exception hierarchy shared by the library and the command line."""


class GraphConeError(Exception):
    """Base class; the CLI maps it to exit code 1."""


class GraphError(GraphConeError):
    """A graph violates trivalence or an operation's precondition."""


class GraphParseError(GraphError):
    """Malformed graph or element text (exit code 2 in the CLI)."""


class ConeError(GraphConeError):
    """An element is outside the lattice or cone where membership is required."""


class BudgetExceeded(GraphConeError):
    """Enumeration work would exceed the configured budget."""


class SeriesError(GraphConeError):
    """A rational series expansion produced inconsistent coefficients."""
