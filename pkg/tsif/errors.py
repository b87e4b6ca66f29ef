class CatalogError(ValueError):
    """A catalog entry failed its oracle gate or is malformed."""


class NoBoundError(ValueError):
    """The catalog has no upper-bound formula for a constraint."""


class HomogeneityError(ValueError):
    """A seed transducer does not satisfy the homogeneity conditions."""


class SeparationError(ValueError):
    """Before-found and after-found states overlap."""


class DependentRelationError(ValueError):
    """A dependent relation R_j = c * R_k + d has no relation automaton."""


class CircuitLimitError(RuntimeError):
    """Circuit enumeration exceeded the configured limit."""


class NegativeCycleError(RuntimeError):
    """A digraph expected to be free of negative cycles contains one."""

    def __init__(self, message: str, cycle: list = None):
        super().__init__(message)
        self.cycle = cycle or []
