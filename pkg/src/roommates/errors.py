"""Exception hierarchy and the typed "no stable matching" result."""

from __future__ import annotations


class RoommatesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstance(RoommatesError, ValueError):
    """Preference data violates mutual acceptability or strictness."""


class ParseError(RoommatesError, ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class InvalidMatching(RoommatesError, ValueError):
    """A set of edges is not a matching of the instance."""


class UnknownEdge(RoommatesError, KeyError):
    """The queried pair is not a mutually acceptable edge."""


class InstanceTooLarge(RoommatesError):
    """Brute-force routine called on an instance above its size bound."""


class NoStableMatchingError(RoommatesError):
    """Raised by operations that require at least one stable matching."""


class NotPerfectCore(RoommatesError):
    """Operation needs an instance whose stable matchings are perfect."""


class EdgeInEM(RoommatesError):
    """The edge lies in some stable matching."""


class DomainMismatch(RoommatesError, ValueError):
    """A fractional point carries coordinates outside the variant's domain."""


class BadPartition(RoommatesError, ValueError):
    """A semi-stable partition candidate fails cover or cyclicity checks."""


class NotSemiStable(RoommatesError, ValueError):
    """A point is not induced by a semi-stable partition."""


class NotBipartite(RoommatesError):
    """The graph (or the proposed side) is not a bipartition."""


class NotReducible(RoommatesError):
    """The instance is not bipartite reducible."""


class PreconditionViolated(RoommatesError):
    """Instance is outside the class an algorithm is defined for."""

    def __init__(self, message: str, vertex: int | None = None, degree: int | None = None):
        super().__init__(message)
        self.vertex = vertex
        self.degree = degree


class CyclicPrecedence(RoommatesError, ValueError):
    """Closure precedence relation contains a directed cycle."""


class NoStableMatching:
    """Result value signalling that an instance has no stable matching.

    Falsy, so ``if find_stable_matching(p):`` reads naturally.  Use the
    module-level singleton :data:`NO_STABLE_MATCHING`.
    """

    _instance: NoStableMatching | None = None

    def __new__(cls) -> NoStableMatching:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NO_STABLE_MATCHING"


NO_STABLE_MATCHING = NoStableMatching()


class Unsatisfiable:
    """Result value of an unsatisfiable two-literal system."""

    _instance: Unsatisfiable | None = None

    def __new__(cls) -> Unsatisfiable:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "UNSATISFIABLE"


UNSATISFIABLE = Unsatisfiable()
