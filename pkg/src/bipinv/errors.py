"""Exception hierarchy. Every error carries enough data to name its witness."""


class BipinvError(Exception):
    """Base class for all package errors."""


class EdgeListSyntaxError(BipinvError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotBipartite(BipinvError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"graph is not bipartite; odd cycle {self.cycle}")


class OrderMismatch(BipinvError, ValueError):
    pass


class NoPerfectMatching(BipinvError):
    def __init__(self, message="graph has no perfect matching", matched=None):
        self.matched = matched
        super().__init__(message)


class NotUnique(BipinvError):
    """A perfect matching exists but is not unique.

    ``matching`` is one perfect matching (sorted ``(r, c)`` pairs) and ``cycle``
    is a closed vertex sequence alternating between matching and non-matching
    edges; swapping along it yields a second perfect matching.
    """

    def __init__(self, matching, cycle):
        self.matching = tuple(matching)
        self.cycle = tuple(cycle)
        super().__init__(f"perfect matching is not unique; alternating cycle {self.cycle}")


class CycleFound(BipinvError):
    def __init__(self, cycle=()):
        self.cycle = tuple(cycle)
        super().__init__(f"digraph has a directed cycle {self.cycle}")


class NotAcyclic(CycleFound):
    pass


class SameVertex(BipinvError, ValueError):
    pass


class NotFlower(BipinvError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(f"not a flower: {reason}")


class SizeTooSmall(BipinvError, ValueError):
    pass


class NotTriangularizable(BipinvError):
    pass


class NotUnitTriangular(BipinvError, ValueError):
    pass


class MissingVertex(BipinvError, KeyError):
    pass


class PreconditionViolated(BipinvError):
    pass


class TooLarge(BipinvError):
    pass


class Singular(BipinvError, ZeroDivisionError):
    pass
