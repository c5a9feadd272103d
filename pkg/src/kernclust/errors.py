class KernelClusteringError(Exception):
    """Base class for all errors raised by kernclust."""


class NotPsd(KernelClusteringError, ValueError):
    pass


class NotCentered(KernelClusteringError, ValueError):
    pass


class SolverError(KernelClusteringError, RuntimeError):
    pass


class EmptyInput(KernelClusteringError, ValueError):
    pass


class TooLarge(KernelClusteringError, ValueError):
    pass


class DegenerateB(KernelClusteringError, ValueError):
    """All Gram vectors of the comparison matrix coincide."""


class ParseError(KernelClusteringError, ValueError):
    pass
