"""Exception hierarchy.

Input problems derive from ``InputError`` (CLI exit code 1); infeasible
requests derive from ``InfeasibleError`` (CLI exit code 2).
"""


class LinkOptError(Exception):
    """Base class for all errors raised by linkopt."""


class InputError(LinkOptError, ValueError):
    pass


class GraphFormatError(InputError):
    pass


class NodeRangeError(InputError):
    pass


class DanglingNodeError(InputError):
    def __init__(self, nodes):
        self.nodes = tuple(nodes)
        super().__init__(
            f"dangling nodes (no outlinks): {list(self.nodes)}; "
            "use patch_dangling / --patch-dangling to add uniform outlinks"
        )


class EdgeExistsError(InputError):
    pass


class MissingEdgeError(InputError):
    pass


class InfeasibleError(LinkOptError):
    pass


class ComplementEmptyError(InfeasibleError):
    """The complement of the node set is empty, so accessibility is undefined."""


class AssumptionViolated(InfeasibleError):
    """Some node of the set has no path leaving the set."""

    def __init__(self, nodes):
        self.nodes = tuple(sorted(nodes))
        super().__init__(f"accessibility assumption violated by nodes {list(self.nodes)}")


class NoAccessError(InfeasibleError):
    pass


class InapplicableError(InfeasibleError):
    """A proposition's precondition does not hold, so it makes no claim."""


class SearchCapExceeded(InfeasibleError):
    pass


class ConvergenceError(LinkOptError):
    pass
